#ifndef CQLAB_VERDICT_HPP
#define CQLAB_VERDICT_HPP

#include <optional>
#include <string>
#include <vector>

#include "cqlab/multiindex.hpp"
#include "cqlab/vec.hpp"

namespace cqlab {

struct AssumptionNotGuaranteedError : std::runtime_error {
  AssumptionNotGuaranteedError(const std::string& delta)
      : std::runtime_error("blockwise assumption not guaranteed for multi-index " +
                           delta) {}
};

struct InternalConsistencyError : std::logic_error {
  InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

enum class Status { HOLDS, FAILS, UNDECIDED };

inline const char* status_str(Status s) {
  switch (s) {
    case Status::HOLDS: return "HOLDS";
    case Status::FAILS: return "FAILS";
    default: return "UNDECIDED";
  }
}

/// A violating sequence x^k = xbar + diag(t_k^{e_i}) v, t_k = t0 * 2^{-k},
/// together with the per-block values of the violated strict inequalities.
struct WitnessSequence {
  QVec lambda;                // the multiplier ray driving the violation
  QVec direction;             // integer pattern v
  std::vector<int> exponents; // per-coordinate exponents e_i
  Rational t0;                // radius of the first printed point
  std::vector<QVec> points;   // at least 3 consecutive points
  // value of <lambda_nu, F_nu(x^k) - F_nu(xbar)> per printed point, per
  // active block nu (blocks with lambda_nu != 0)
  std::vector<std::vector<Rational>> values;        // exact path
  std::vector<std::vector<double>> values_approx;   // float path
  std::vector<std::size_t> active_blocks;
  bool exact = false;
};

struct Verdict {
  Status status = Status::UNDECIDED;
  std::string certificate;            // machine-readable reason for HOLDS
  std::vector<std::string> notes;     // diagnostics / skipped branches
  std::optional<QVec> witness_lambda; // for FAILS
  std::optional<QVec> witness_u;      // violating direction, when relevant
  std::optional<WitnessSequence> witness_sequence;
};

inline Verdict holds(std::string certificate) {
  Verdict v;
  v.status = Status::HOLDS;
  v.certificate = std::move(certificate);
  return v;
}

inline Verdict undecided() { return Verdict{}; }

}  // namespace cqlab

#endif
