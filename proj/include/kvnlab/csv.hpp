#pragma once

#include <filesystem>

#include "kvnlab/field.hpp"

namespace kvnlab {

/// Field CSV: header "# grid: x_min x_max n", rows "x,re,im".
void write_field_csv(const std::filesystem::path& path, const ComplexField1D& f);
/// 2D field CSV: header "# grid: q_min q_max n_q p_min p_max n_p", row-major
/// rows "q,p,re,im".
void write_field_csv(const std::filesystem::path& path, const ComplexField2D& f);

/// Density CSV: header "# grid: x_min x_max n", rows "x,density".
void write_density_csv(const std::filesystem::path& path, const RealField1D& f);
/// 2D density CSV: header as the 2D field, rows "q,p,density".
void write_density_csv(const std::filesystem::path& path, const RealField2D& f);

RealField1D read_density_csv_1d(const std::filesystem::path& path);

/// Shortest-round-trip decimal formatting shared by all writers, so outputs
/// are byte-reproducible.
std::string format_double(double v);

} // namespace kvnlab
