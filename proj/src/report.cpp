#include "kvnlab/report.hpp"

#include <cstdint>
#include <fstream>

#include "kvnlab/csv.hpp"
#include "kvnlab/errors.hpp"

namespace kvnlab {

void ExperimentReport::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);

    nlohmann::json j;
    j["experiment"] = experiment;
    j["params"] = params;
    if (!info.empty()) j["info"] = info;
    j["densities"] = nlohmann::json::object();
    for (const auto& [name, field] : densities) {
        const std::string file = name + ".csv";
        j["densities"][name] = file;
        std::visit([&](const auto& f) { write_density_csv(dir / file, f); }, field);
    }
    if (!tables.empty()) {
        j["tables"] = nlohmann::json::object();
        for (const auto& [name, body] : tables) {
            const std::string file = name + ".csv";
            j["tables"][name] = file;
            std::ofstream out(dir / file, std::ios::binary);
            if (!out) throw DataError("cannot write " + (dir / file).string());
            out << body;
        }
    }
    j["moments"] = moments;
    j["closed_form"] = closed_form;
    j["max_abs_error"] = max_abs_error;
    if (!extra.is_null()) j["extra"] = extra;

    std::ofstream out(dir / "report.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "report.json").string());
    out << j.dump(2) << '\n';
}

std::string fnv1a64_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for checksum: " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

} // namespace kvnlab
