#include "transonic/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace transonic::report {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CheckList::pass_if(const std::string& name, bool ok, double value,
                        double threshold, const std::string& note) {
  checks_.push_back({name, ok ? CheckStatus::Pass : CheckStatus::Fail, value, threshold, note});
}

void CheckList::warn_if(const std::string& name, bool ok, double value,
                        double threshold, const std::string& note) {
  checks_.push_back({name, ok ? CheckStatus::Pass : CheckStatus::Warn, value, threshold, note});
}

bool CheckList::all_passed() const {
  for (const auto& c : checks_)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

void CheckList::print(std::ostream& os) const {
  for (const auto& c : checks_) {
    const char* tag = c.status == CheckStatus::Pass   ? "PASS"
                      : c.status == CheckStatus::Fail ? "FAIL"
                                                      : "WARN";
    os << "[" << tag << "] " << c.name << ": value=" << fmt17(c.value);
    if (c.threshold != 0.0) os << " threshold=" << fmt17(c.threshold);
    if (!c.note.empty()) os << " (" << c.note << ")";
    os << "\n";
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SolverError("io", "cannot write " + path.string());
  out << text;
}

void write_branch_csv(const std::filesystem::path& path,
                      const std::vector<BranchSample>& samples) {
  std::string s = "x,n,E,regime\n";
  for (const auto& r : samples) {
    s += fmt17(r.x);
    s += ',';
    s += fmt17(r.n);
    s += ',';
    s += fmt17(r.E);
    s += ',';
    s += regime_name(r.regime);
    s += '\n';
  }
  write_text(path, s);
}

void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) s += ',';
    s += header[i];
  }
  s += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += fmt17(row[i]);
    }
    s += '\n';
  }
  write_text(path, s);
}

void write_portrait_csv(const std::filesystem::path& path,
                        const std::vector<PortraitCurve>& curves) {
  std::string s = "curve,kind,n,E\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (std::size_t i = 0; i < curves[c].n.size(); ++i) {
      s += std::to_string(c);
      s += ',';
      s += curves[c].kind;
      s += ',';
      s += fmt17(curves[c].n[i]);
      s += ',';
      s += fmt17(curves[c].E[i]);
      s += '\n';
    }
  }
  write_text(path, s);
}

void write_portrait_svg(const std::filesystem::path& path,
                        const std::vector<PortraitCurve>& curves, double sonic_n,
                        double crossing_E) {
  // data bounding box
  double n_min = sonic_n - 1.0, n_max = sonic_n + 1.0;
  double E_min = crossing_E - 1.0, E_max = crossing_E + 1.0;
  bool any = false;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.n.size(); ++i) {
      if (!any) {
        n_min = n_max = c.n[i];
        E_min = E_max = c.E[i];
        any = true;
      }
      n_min = std::min(n_min, c.n[i]);
      n_max = std::max(n_max, c.n[i]);
      E_min = std::min(E_min, c.E[i]);
      E_max = std::max(E_max, c.E[i]);
    }
  if (n_max - n_min < 1e-12) n_max = n_min + 1.0;
  if (E_max - E_min < 1e-12) E_max = E_min + 1.0;

  const double W = 720.0, H = 540.0, pad = 40.0;
  auto px = [&](double n) { return pad + (n - n_min) / (n_max - n_min) * (W - 2 * pad); };
  auto py = [&](double E) { return H - pad - (E - E_min) / (E_max - E_min) * (H - 2 * pad); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt17(W) + " " +
       fmt17(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  s += "<line x1=\"" + fmt17(pad) + "\" y1=\"" + fmt17(H - pad) + "\" x2=\"" +
       fmt17(W - pad) + "\" y2=\"" + fmt17(H - pad) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt17(pad) + "\" y1=\"" + fmt17(pad) + "\" x2=\"" + fmt17(pad) +
       "\" y2=\"" + fmt17(H - pad) + "\" stroke=\"black\"/>\n";
  // sonic reference line n = J
  if (sonic_n > n_min && sonic_n < n_max)
    s += "<line x1=\"" + fmt17(px(sonic_n)) + "\" y1=\"" + fmt17(pad) + "\" x2=\"" +
         fmt17(px(sonic_n)) + "\" y2=\"" + fmt17(H - pad) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  for (const auto& c : curves) {
    const char* color = c.kind == "grid" ? "steelblue"
                        : c.kind == "smooth_sup_to_sub" ? "crimson"
                                                        : "darkorange";
    s += "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"";
    s += (c.kind == "grid" ? "0.8" : "2");
    s += "\" points=\"";
    for (std::size_t i = 0; i < c.n.size(); ++i) {
      if (i) s += ' ';
      s += fmt17(px(c.n[i]));
      s += ',';
      s += fmt17(py(c.E[i]));
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  write_text(path, s);
}

}  // namespace transonic::report
