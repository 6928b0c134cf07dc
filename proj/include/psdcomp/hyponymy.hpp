#ifndef PSDCOMP_HYPONYMY_HPP
#define PSDCOMP_HYPONYMY_HPP

#include "psdcomp/linalg.hpp"

namespace psdcomp {

enum class Measure { kE, kBA, Crisp };

Measure measure_from_name(const std::string& name);  // "ke" | "kba" | "crisp"
const std::string& measure_name(Measure m);

// Graded hyponymy 1 - ||E|| / ||A||, where E is the negative eigenpart of
// B - A. Equals 1 iff A <= B in the Loewner order. Throws ZeroMatrix for
// zero A.
double k_e(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol = {});

// Balanced graded hyponymy sum(lambda_i) / sum(|lambda_i|) over eigenvalues
// of B - A with |lambda| > tol dropped; 1.0 when none remain.
double k_ba(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol = {});

// Crisp Loewner order A <= B.
bool crisp(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol = {});

double score(Measure measure, const PsdMatrix& a, const PsdMatrix& b,
             const Tolerance& tol = {});

}  // namespace psdcomp

#endif
