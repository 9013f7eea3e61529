#include "ifem/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ifem/exceptions.hpp"

namespace ifem {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string uniform_csv(const std::vector<ErrorRecord>& records, bool precise) {
  const char* val = precise ? "%.17g" : "%.2e";
  const char* ord = precise ? "%.17g" : "%.2f";
  std::vector<double> dof;
  for (const auto& r : records) dof.push_back(static_cast<double>(r.dof));
  auto column = [&](double ErrorRecord::*m) {
    std::vector<double> c;
    for (const auto& r : records) c.push_back(r.*m);
    return c;
  };
  const std::vector<double ErrorRecord::*> members{&ErrorRecord::De, &ErrorRecord::Die, &ErrorRecord::Dre,
                                                   &ErrorRecord::Dpe};
  std::vector<std::vector<double>> orders;
  for (auto m : members) orders.push_back(records.size() > 1 ? convergence_order(column(m), dof) : std::vector<double>{});

  std::ostringstream os;
  os << "dof,De,De_order,Die,Die_order,Dre,Dre_order,Dpe,Dpe_order\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    os << records[k].dof;
    for (std::size_t c = 0; c < members.size(); ++c) {
      os << ',' << fmt(val, records[k].*members[c]) << ',';
      os << (k == 0 ? std::string("--") : fmt(ord, orders[c][k - 1]));
    }
    os << '\n';
  }
  return os.str();
}

std::string adaptive_csv(const std::vector<ErrorRecord>& records, bool precise) {
  const char* val = precise ? "%.17g" : "%.2e";
  const char* kap = precise ? "%.17g" : "%.3f";
  std::ostringstream os;
  os << "iter,dof,energy_err,eta,kappa\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    os << k << ',' << r.dof << ',' << fmt(val, r.energy_error) << ',' << fmt(val, r.eta) << ','
       << fmt(kap, r.kappa) << '\n';
  }
  return os.str();
}

std::string adaptive_extra_csv(const std::vector<ErrorRecord>& records) {
  std::ostringstream os;
  os << "iter,dof,De,Die,Dre,Dpe,recovered_energy_err,cg_iterations,cg_residual\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    os << k << ',' << r.dof << ',' << fmt("%.17g", r.De) << ',' << fmt("%.17g", r.Die) << ','
       << fmt("%.17g", r.Dre) << ',' << fmt("%.17g", r.Dpe) << ',' << fmt("%.17g", r.recovered_energy_error)
       << ',' << r.cg_iterations << ',' << fmt("%.3e", r.cg_residual) << '\n';
  }
  return os.str();
}

namespace {

struct Frame {
  Rect box;
  double scale;
  int size;
  double px(double x) const { return (x - box.x0) * scale; }
  double py(double y) const { return size - (y - box.y0) * scale; }
};

Frame frame_for(const Mesh& mesh, int size) {
  const double span = std::max(mesh.domain.width(), mesh.domain.height());
  return {mesh.domain, size / span, size};
}

void polygon(std::ostringstream& os, const Frame& f, const std::array<Point2, 3>& c, const std::string& fill,
             double stroke_width) {
  os << "<polygon points=\"";
  for (const Point2& p : c) os << fmt("%.3f", f.px(p.x)) << ',' << fmt("%.3f", f.py(p.y)) << ' ';
  os << "\" fill=\"" << fill << "\" stroke=\"#333\" stroke-width=\"" << stroke_width << "\"/>\n";
}

std::string svg_open(int w, int h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string mesh_svg(const Mesh& mesh, int size_px) {
  const Frame f = frame_for(mesh, size_px);
  std::ostringstream os;
  os << svg_open(size_px, size_px);
  const double sw = std::clamp(0.5 * size_px / std::sqrt(std::max<double>(1.0, mesh.num_triangles())), 0.02, 0.6);
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    polygon(os, f, mesh.corners(t), mesh.triangle_region[t] == RegionTag::Minus ? "#cfe0f5" : "#f6dcc8", sw);
  }
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) {
    if (!mesh.is_interface_edge(e)) continue;
    const Point2 a = mesh.vertices[mesh.edges[e].a], b = mesh.vertices[mesh.edges[e].b];
    os << "<line x1=\"" << fmt("%.3f", f.px(a.x)) << "\" y1=\"" << fmt("%.3f", f.py(a.y)) << "\" x2=\""
       << fmt("%.3f", f.px(b.x)) << "\" y2=\"" << fmt("%.3f", f.py(b.y))
       << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string solution_svg(const Mesh& mesh, const std::vector<double>& minus_values,
                         const std::vector<double>& plus_values, int size_px) {
  const Frame f = frame_for(mesh, size_px);
  std::vector<double> mean(mesh.num_triangles());
  for (std::size_t t = 0; t < mean.size(); ++t) {
    const auto& vals = mesh.triangle_region[t] == RegionTag::Minus ? minus_values : plus_values;
    const auto& tri = mesh.triangles[t];
    mean[t] = (vals[tri[0]] + vals[tri[1]] + vals[tri[2]]) / 3.0;
  }
  const auto [lo, hi] = std::minmax_element(mean.begin(), mean.end());
  const double range = (mean.empty() || *hi == *lo) ? 1.0 : *hi - *lo;
  std::ostringstream os;
  os << svg_open(size_px, size_px);
  for (std::size_t t = 0; t < mean.size(); ++t) {
    const double s = (mean[t] - *lo) / range;
    char color[16];
    std::snprintf(color, sizeof color, "#%02x%02x%02x", static_cast<int>(255 * s), 64,
                  static_cast<int>(255 * (1.0 - s)));
    polygon(os, f, mesh.corners(static_cast<int>(t)), color, 0.0);
  }
  os << "</svg>\n";
  return os.str();
}

std::string loglog_svg(const std::vector<double>& dof, const std::map<std::string, std::vector<double>>& series,
                       int width, int height) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (double d : dof) {
    x0 = std::min(x0, std::log10(d));
    x1 = std::max(x1, std::log10(d));
  }
  for (const auto& [name, ys] : series) {
    for (double y : ys) {
      if (y > 0.0) {
        y0 = std::min(y0, std::log10(y));
        y1 = std::max(y1, std::log10(y));
      }
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double m = 50.0;
  auto px = [&](double lx) { return m + (lx - x0) / (x1 - x0) * (width - 2 * m); };
  auto py = [&](double ly) { return height - m - (ly - y0) / (y1 - y0) * (height - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << svg_open(width, height);
  os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << width - 2 * m << "\" height=\"" << height - 2 * m
     << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" font-size=\"12\">log10(dof) "
     << fmt("%.2f", x0) << " .. " << fmt("%.2f", x1) << "</text>\n";
  int k = 0;
  for (const auto& [name, ys] : series) {
    const char* c = colors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < ys.size() && i < dof.size(); ++i) {
      if (ys[i] > 0.0) os << fmt("%.2f", px(std::log10(dof[i]))) << ',' << fmt("%.2f", py(std::log10(ys[i]))) << ' ';
    }
    os << "\"/>\n<text x=\"" << m + 8 << "\" y=\"" << m + 16 + 14 * k << "\" font-size=\"12\" fill=\"" << c << "\">"
       << name << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ifem
