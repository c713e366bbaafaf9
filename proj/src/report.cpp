#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "chaoslab/independence.hpp"

namespace chaoslab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& os, const RunHeader& header) {
  for (const auto& [key, value] : header) os << "# " << key << ": " << value << '\n';
}

}  // namespace

std::string report_csv(const IndependenceReport& report, const RunHeader& header) {
  std::ostringstream os;
  write_header(os, header);
  os << "pair_i,pair_j,cov2,max_contraction_norm,r_argmax\n";
  for (const PairContractions& p : report.table) {
    os << p.i + 1 << ',' << p.j + 1 << ',' << format_double(p.cov2) << ','
       << format_double(p.max_norm()) << ',' << p.argmax_r() << '\n';
  }
  return os.str();
}

std::string report_json(const IndependenceReport& report, const RunHeader& header) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json hdr = ordered_json::object();
  for (const auto& [key, value] : header) hdr[key] = value;
  doc["header"] = hdr;

  const CriterionVerdict& v = report.verdict;
  doc["tolerance"] = v.tol;
  doc["condition_cov2"] = {{"pass", v.covariance_pass},
                           {"witness", v.covariance_witness},
                           {"pair", {v.covariance_pair.first + 1, v.covariance_pair.second + 1}}};
  doc["condition_contraction"] = {
      {"pass", v.contraction_pass},
      {"witness", v.contraction_witness},
      {"pair", {v.contraction_pair.first + 1, v.contraction_pair.second + 1}},
      {"r", v.contraction_r}};

  ordered_json matrix = ordered_json::array();
  for (std::size_t i = 0; i < report.matrix.size; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < report.matrix.size; ++j) row.push_back(report.matrix.at(i, j));
    matrix.push_back(row);
  }
  doc["groups"] = report.matrix.group_of;
  doc["cov2_matrix"] = matrix;

  ordered_json table = ordered_json::array();
  for (const PairContractions& p : report.table) {
    table.push_back({{"pair_i", p.i + 1},
                     {"pair_j", p.j + 1},
                     {"cov2", p.cov2},
                     {"contraction_norms", p.norms},
                     {"max_contraction_norm", p.max_norm()},
                     {"r_argmax", p.argmax_r()}});
  }
  doc["contractions"] = table;
  doc["dictionary"] = report.dictionary_ids;

  if (report.dependence) {
    const DependenceEstimate& d = *report.dependence;
    ordered_json argmax = ordered_json::array();
    for (int c : d.argmax) argmax.push_back(c);
    doc["empirical"] = {{"gap", d.gap},
                        {"std_error", d.std_error},
                        {"band_stderr", kStdErrorBand},
                        {"within_band", d.within_band()},
                        {"argmax_tuple", argmax},
                        {"seed", d.seed},
                        {"samples", d.samples},
                        {"block_size", d.block_size}};
  } else {
    doc["empirical"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace chaoslab
