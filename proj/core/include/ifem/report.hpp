#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ifem/errors.hpp"
#include "ifem/mesh.hpp"

namespace ifem {

/// Uniform-run table: dof,De,De_order,Die,Die_order,Dre,Dre_order,Dpe,Dpe_order.
/// `precise` switches from three significant digits to round-trip precision.
std::string uniform_csv(const std::vector<ErrorRecord>& records, bool precise = false);

/// Adaptive-run table: iter,dof,energy_err,eta,kappa.
std::string adaptive_csv(const std::vector<ErrorRecord>& records, bool precise = false);

/// Additional adaptive columns (all error measures, CG statistics).
std::string adaptive_extra_csv(const std::vector<ErrorRecord>& records);

/// Triangles filled by region, interface edges drawn thicker.
std::string mesh_svg(const Mesh& mesh, int size_px = 800);

/// Triangles filled by the mean nodal value on a blue-red scale.
std::string solution_svg(const Mesh& mesh, const std::vector<double>& minus_values,
                         const std::vector<double>& plus_values, int size_px = 800);

/// Log-log lines of several error series against dof.
std::string loglog_svg(const std::vector<double>& dof, const std::map<std::string, std::vector<double>>& series,
                       int width = 640, int height = 480);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace ifem
