#include "riemann/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riemann/error.hpp"

namespace riemann {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string field_csv(const DyadicGrid& grid, const std::vector<double>& values, Point translation) {
  std::string out = "x,y,value\n";
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const Point p = grid.node_position(n) - translation;
    out += format_number(p.real()) + ',' + format_number(p.imag()) + ',' + format_number(values[n]) + '\n';
  }
  return out;
}

std::string map_csv(const ConformalMap& m, Point translation) {
  const DyadicGrid& grid = m.grid();
  std::string out = "x,y,g,gconj,reH,imH\n";
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const Point p = grid.node_position(n) - translation;
    out += format_number(p.real()) + ',' + format_number(p.imag()) + ',' +
           format_number(m.g().values[n]) + ',' + format_number(m.conjugate().values[n]) + ',' +
           format_number(m.H()[n].real()) + ',' + format_number(m.H()[n].imag()) + '\n';
  }
  return out;
}

nlohmann::json to_json(const BoundaryModulus& b) {
  return {{"max", b.max}, {"mean", b.mean}, {"node_max", b.node_max}};
}

nlohmann::json to_json(const PreimageCount& c) {
  return {{"w", {c.w.real(), c.w.imag()}},
          {"count", c.count},
          {"raw", c.raw},
          {"shifted", c.shifted},
          {"lambda", c.shift},
          {"clearance", c.clearance},
          {"hazard_unresolved", c.hazard_unresolved}};
}

nlohmann::json to_json(const BarrierReport& r, Point translation) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.shells) {
    samples.push_back({{"radius", s.radius}, {"min_u", s.min_value}, {"nodes", s.nodes}});
  }
  const Point q = r.q - translation;
  return {{"q", {q.real(), q.imag()}},
          {"A", r.bound},
          {"epsilon", r.epsilon},
          {"checks",
           {{"subharmonic", r.subharmonic}, {"negative", r.negative}, {"limit_zero", r.limit_zero}}},
          {"strong", r.strong},
          {"transport", "1/(w - A - 1)"},
          {"worst_subharmonic_excess", r.worst_subharmonic_excess},
          {"slack", r.slack},
          {"samples", samples}};
}

nlohmann::json to_json(const VerificationReport& r, const Domain& domain) {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& c : r.probes) probes.push_back(to_json(c));
  nlohmann::json failures = nlohmann::json::array();
  auto add_failure = [&](const ProbeFailure& f, const char* where) {
    failures.push_back({{"where", where},
                        {"index", f.index},
                        {"w", {f.w.real(), f.w.imag()}},
                        {"error", std::string(to_string(f.code))}});
  };
  for (const auto& f : r.failures) add_failure(f, "fixed");
  for (const auto& f : r.sweep.failures) add_failure(f, "sweep");
  nlohmann::json onto = nlohmann::json::array();
  for (const auto& o : r.sweep.onto) {
    onto.push_back({{"w", {o.w.real(), o.w.imag()}},
                    {"found", o.found},
                    {"z", {o.z.real(), o.z.imag()}},
                    {"residual", o.residual}});
  }
  return {{"domain", to_json(domain)},
          {"N", r.level},
          {"lambda", r.shift},
          {"probes", probes},
          {"failures", failures},
          {"boundary_modulus", to_json(r.boundary)},
          {"cr_residual", r.cr_residual},
          {"sweep",
           {{"r", r.sweep.radius},
            {"K", r.sweep.probes},
            {"seed", r.sweep.seed},
            {"ok_fraction", r.sweep.ok_fraction},
            {"exceptions", r.sweep.exceptions},
            {"onto", onto}}},
          {"indeterminate", r.indeterminate}};
}

nlohmann::json to_json(const MaxPrincipleReport& r) {
  return {{"pass", r.pass},
          {"interior", {r.interior_min, r.interior_max}},
          {"boundary", {r.boundary_min, r.boundary_max}},
          {"slack", r.slack}};
}

std::string render_grid_image(const ConformalMap& m, const SvgStyle& style) {
  const DyadicGrid& grid = m.grid();
  if (grid.node_count() == 0) throw Error(ErrorCode::MalformedInput, "empty grid");

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\""
      << style.pixels << "\" height=\"" << style.pixels << "\">\n";
  svg << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\""
      << format_number(style.stroke_width) << "\">\n";
  svg << "<circle cx=\"0\" cy=\"0\" r=\"1\" stroke=\"" << style.circle_stroke << "\"/>\n";

  auto emit_runs = [&](DyadicGrid::Dir back, DyadicGrid::Dir forward) {
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      if (grid.neighbor(n, back) != kNoNode || grid.neighbor(n, forward) == kNoNode) continue;
      svg << "<polyline stroke=\"" << style.stroke << "\" points=\"";
      for (std::int64_t cur = static_cast<std::int64_t>(n); cur != kNoNode;
           cur = grid.neighbor(static_cast<std::size_t>(cur), forward)) {
        const Complex v = m.H()[static_cast<std::size_t>(cur)];
        if (cur != static_cast<std::int64_t>(n)) svg << ' ';
        svg << format_number(v.real()) << ',' << format_number(v.imag());
      }
      svg << "\"/>\n";
    }
  };
  emit_runs(DyadicGrid::West, DyadicGrid::East);
  emit_runs(DyadicGrid::South, DyadicGrid::North);
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::MalformedInput, "cannot write " + tmp);
    out << content;
    if (!out.flush()) throw Error(ErrorCode::MalformedInput, "failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::MalformedInput, "cannot rename onto " + path);
  }
}

}  // namespace riemann
