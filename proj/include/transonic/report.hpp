#ifndef TRANSONIC_REPORT_HPP
#define TRANSONIC_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "transonic/types.hpp"

namespace transonic::report {

/// Formats a double with 17 significant digits, locale-independent.
std::string fmt17(double v);

enum class CheckStatus { Pass, Fail, Warn };

struct Check {
  std::string name;
  CheckStatus status;
  double value;      // measured quantity
  double threshold;  // bound it was compared against (0 if n/a)
  std::string note;
};

class CheckList {
 public:
  void pass_if(const std::string& name, bool ok, double value, double threshold,
               const std::string& note = "");
  void warn_if(const std::string& name, bool ok, double value, double threshold,
               const std::string& note = "");
  void add(Check c) { checks_.push_back(std::move(c)); }

  bool all_passed() const;
  const std::vector<Check>& checks() const { return checks_; }
  void print(std::ostream& os) const;

 private:
  std::vector<Check> checks_;
};

/// One polyline of a phase portrait in (n, E) data coordinates.
struct PortraitCurve {
  std::string kind;  // grid | smooth_sup_to_sub | smooth_sub_to_sup
  std::vector<double> n;
  std::vector<double> E;
};

/// Deterministic emission helpers. All writers produce byte-stable output
/// for identical inputs.
void write_branch_csv(const std::filesystem::path& path,
                      const std::vector<BranchSample>& samples);
void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);
void write_portrait_csv(const std::filesystem::path& path,
                        const std::vector<PortraitCurve>& curves);
void write_portrait_svg(const std::filesystem::path& path,
                        const std::vector<PortraitCurve>& curves, double sonic_n,
                        double crossing_E);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace transonic::report

#endif  // TRANSONIC_REPORT_HPP
