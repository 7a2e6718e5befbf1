#include "kvnlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kvnlab/errors.hpp"

namespace kvnlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    return out;
}

void write_grid_header(std::ofstream& out, const Grid1D& g) {
    out << "# grid: " << format_double(g.x_min) << ' ' << format_double(g.x_max) << ' ' << g.n
        << '\n';
}

void write_grid_header(std::ofstream& out, const Grid2D& g) {
    out << "# grid: " << format_double(g.q_axis.x_min) << ' ' << format_double(g.q_axis.x_max)
        << ' ' << g.q_axis.n << ' ' << format_double(g.p_axis.x_min) << ' '
        << format_double(g.p_axis.x_max) << ' ' << g.p_axis.n << '\n';
}

} // namespace

void write_field_csv(const std::filesystem::path& path, const ComplexField1D& f) {
    std::ofstream out = open_out(path);
    write_grid_header(out, f.grid);
    for (std::size_t i = 0; i < f.grid.n; ++i)
        out << format_double(f.grid.point(i)) << ',' << format_double(f.values[i].real()) << ','
            << format_double(f.values[i].imag()) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const ComplexField2D& f) {
    std::ofstream out = open_out(path);
    write_grid_header(out, f.grid);
    for (std::size_t iq = 0; iq < f.grid.q_axis.n; ++iq)
        for (std::size_t ip = 0; ip < f.grid.p_axis.n; ++ip) {
            const Complex v = f.at(iq, ip);
            out << format_double(f.grid.q_axis.point(iq)) << ','
                << format_double(f.grid.p_axis.point(ip)) << ',' << format_double(v.real()) << ','
                << format_double(v.imag()) << '\n';
        }
}

void write_density_csv(const std::filesystem::path& path, const RealField1D& f) {
    std::ofstream out = open_out(path);
    write_grid_header(out, f.grid);
    for (std::size_t i = 0; i < f.grid.n; ++i)
        out << format_double(f.grid.point(i)) << ',' << format_double(f.values[i]) << '\n';
}

void write_density_csv(const std::filesystem::path& path, const RealField2D& f) {
    std::ofstream out = open_out(path);
    write_grid_header(out, f.grid);
    for (std::size_t iq = 0; iq < f.grid.q_axis.n; ++iq)
        for (std::size_t ip = 0; ip < f.grid.p_axis.n; ++ip)
            out << format_double(f.grid.q_axis.point(iq)) << ','
                << format_double(f.grid.p_axis.point(ip)) << ',' << format_double(f.at(iq, ip))
                << '\n';
}

RealField1D read_density_csv_1d(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open for reading: " + path.string());
    std::string header;
    std::getline(in, header);
    double x_min = 0.0, x_max = 0.0;
    std::size_t n = 0;
    {
        std::istringstream hs(header);
        std::string hash, tag;
        hs >> hash >> tag >> x_min >> x_max >> n;
        if (hash != "#" || tag != "grid:" || n == 0)
            throw DataError("malformed density CSV header in " + path.string());
    }
    RealField1D out{Grid1D(n, x_min, x_max)};
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line) && i < n) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("malformed density CSV row");
        out.values[i++] = std::stod(line.substr(comma + 1));
    }
    if (i != n) throw DataError("density CSV truncated: " + path.string());
    return out;
}

} // namespace kvnlab
