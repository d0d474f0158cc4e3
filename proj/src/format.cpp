#include "mutsim/format.hpp"

#include <charconv>
#include <fstream>

#include "mutsim/error.hpp"

namespace mutsim {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,x,y\n";
    out.reserve(out.size() + traj.xs.size() * 72);
    for (std::size_t k = 0; k < traj.xs.size(); ++k) {
        out += format_double(traj.times[k]);
        out += ',';
        out += format_double(traj.xs[k]);
        out += ',';
        out += format_double(traj.ys[k]);
        out += '\n';
    }
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace mutsim
