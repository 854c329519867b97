// SPDX-License-Identifier: MIT

#include "bgk/report.hpp"

#include <cmath>

#include "bgk/io.hpp"

namespace bgk {

void write_run_csv(const std::string& path, const RunReport& report) {
  std::string header = "step,t,mass,mom_x";
  if (report.d == 2) header += ",mom_y";
  header +=
      ",kinetic_energy,total_entropy,min_rho,l_infty"
      ",h_eq_plain,h_eq_reg,e2_eq_plain,e2_eq_reg,min_f,l_1p2n,xmom2,corr_max";
  io::Csv csv(header);
  for (const StepRecord& r : report.steps) {
    std::vector<double> row;
    row.reserve(17);
    row.push_back(static_cast<double>(r.step));
    row.push_back(r.t);
    row.push_back(r.mass);
    row.push_back(r.mom_x);
    if (report.d == 2) row.push_back(r.mom_y);
    row.push_back(0.5 * r.energy2);
    row.push_back(r.h_total);
    row.push_back(r.min_rho);
    row.push_back(r.l_infty);
    row.push_back(r.h_eq_plain);
    row.push_back(r.h_eq_reg);
    row.push_back(r.e2_eq_plain);
    row.push_back(r.e2_eq_reg);
    row.push_back(r.min_f);
    row.push_back(r.l_1p2n);
    row.push_back(r.xmom2);
    row.push_back(r.corr_max);
    csv.row(row);
  }
  csv.save(path);
}

}  // namespace bgk
