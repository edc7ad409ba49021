#include <cstdio>
#include <ostream>

#include "clearnet/milp.hpp"

namespace clearnet {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fld(const std::string& s, int width) {
  std::string out = s;
  if (static_cast<int>(out.size()) < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

void write_mps(const MilpInstance& inst, std::ostream& os, const std::string& name) {
  const bool maximize = inst.sense == lp::Sense::Maximize;
  const double obj_sign = maximize ? -1.0 : 1.0;
  const int nvars = static_cast<int>(inst.objective.size());
  const int nrows = static_cast<int>(inst.A.rows());

  os << "NAME          " << name << "\n";
  if (maximize)
    os << "* maximization problem: objective coefficients are negated so that\n"
       << "* a minimizing reader solves the same instance\n";
  os << "ROWS\n";
  os << " N  COST\n";
  for (int r = 0; r < nrows; ++r) {
    const char* type = inst.rel[r] == lp::Rel::LE ? "L" : inst.rel[r] == lp::Rel::GE ? "G" : "E";
    os << " " << fld(type, 2) << " " << inst.row_names[r] << "\n";
  }

  os << "COLUMNS\n";
  std::vector<bool> is_binary(nvars, false);
  for (int j : inst.binaries) is_binary[j] = true;
  bool in_int_block = false;
  int marker_id = 0;
  for (int j = 0; j < nvars; ++j) {
    if (is_binary[j] != in_int_block) {
      os << "    " << fld("M" + std::to_string(marker_id++), 10) << fld("'MARKER'", 25)
         << (is_binary[j] ? "'INTORG'" : "'INTEND'") << "\n";
      in_int_block = is_binary[j];
    }
    if (inst.objective(j) != 0.0)
      os << "    " << fld(inst.col_names[j], 10) << fld("COST", 10)
         << num(obj_sign * inst.objective(j)) << "\n";
    for (int r = 0; r < nrows; ++r) {
      if (inst.A(r, j) != 0.0)
        os << "    " << fld(inst.col_names[j], 10) << fld(inst.row_names[r], 10)
           << num(inst.A(r, j)) << "\n";
    }
  }
  if (in_int_block)
    os << "    " << fld("M" + std::to_string(marker_id++), 10) << fld("'MARKER'", 25)
       << "'INTEND'\n";

  os << "RHS\n";
  for (int r = 0; r < nrows; ++r) {
    if (inst.rhs(r) != 0.0)
      os << "    " << fld("RHS", 10) << fld(inst.row_names[r], 10) << num(inst.rhs(r)) << "\n";
  }

  os << "BOUNDS\n";
  for (int j = 0; j < nvars; ++j) {
    if (inst.lo(j) != 0.0)
      os << " LO " << fld("BND", 10) << fld(inst.col_names[j], 10) << num(inst.lo(j)) << "\n";
    os << " UP " << fld("BND", 10) << fld(inst.col_names[j], 10) << num(inst.up(j)) << "\n";
  }
  os << "ENDATA\n";
}

}  // namespace clearnet
