#pragma once

#include "qstatfn/estimation.hpp"
#include "qstatfn/quasiprob.hpp"
#include "qstatfn/types.hpp"
#include "qstatfn/wigner.hpp"

#include <iosfwd>
#include <string>

namespace qstatfn {

// Shared JSON matrix contract: {"dim": d, "re": [[row-major]], "im": [[...]]},
// "im" optional (defaults to zero).
Matrix matrix_from_json(const std::string& text);
Matrix load_matrix(const std::string& path);
std::string matrix_to_json(const Matrix& m);

// Fixed 10-significant-digit float formatting for stable golden files;
// negative zero normalizes to "0".
std::string format_number(double x);

// Header `outcome_1,...,outcome_n,re,im`, rows in outcome-ascending
// lexicographic order.
void write_quasiprob_csv(std::ostream& os, const QuasiProbTable& table);

// Rows `q,p,w`, lexicographic in (q, p).
void write_wigner_csv(std::ostream& os, const WignerTable& table);
WignerTable read_wigner_csv(std::istream& is);

EstimationConfig estimation_config_from_json(const std::string& text);
std::string estimation_result_to_json(const EstimationRunResult& run);

} // namespace qstatfn
