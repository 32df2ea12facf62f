#ifndef CTXLAB_FOCK_HPP
#define CTXLAB_FOCK_HPP

#include <string>
#include <utility>
#include <vector>

#include "ctxlab/cmatrix.hpp"
#include "json.hpp"

namespace ctxlab::fock {

inline constexpr int kMaxPermanentDim = 16;
inline constexpr int kMaxPhotons = 6;
inline constexpr double kProbTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

// Single-particle mode transformation of a d-mode interferometer.
// Unitarity (max-entry deviation of U U† from identity) is checked once here;
// every downstream probability statement relies on it.
class ModeUnitary {
 public:
  explicit ModeUnitary(CMatrix u);

  static ModeUnitary identity(int dim);
  // (1/sqrt2) [[1, 1], [1, -1]]. Phase convention is irrelevant for every
  // probability this project asserts.
  static ModeUnitary beam_splitter_5050();

  int dim() const { return static_cast<int>(u_.rows()); }
  const CMatrix& matrix() const { return u_; }

 private:
  CMatrix u_;
};

// Photon occupation numbers per mode.
struct FockState {
  std::vector<int> occupations;

  int modes() const { return static_cast<int>(occupations.size()); }
  int total_photons() const;
  void validate() const;  // throws unless all occupations >= 0
};

bool operator==(const FockState& a, const FockState& b);
bool lex_less(const FockState& a, const FockState& b);

struct OutcomeDistribution {
  // Sorted lexicographically by occupation vector; covers every output
  // pattern with the input's photon number, including zero-probability ones.
  std::vector<std::pair<FockState, double>> support;

  double probability_of(const FockState& s) const;
  double total() const;
};

// Permanent via Ryser's formula with Gray-code row-sum updates, O(2^n n).
// n <= 16; deterministic bit for bit for a fixed input.
cdouble permanent(const CMatrix& m);

// |Perm(U[rows(out), cols(in)])|^2 / (prod s_i! prod t_j!)
double transition_probability(const ModeUnitary& u, const FockState& input, const FockState& output);

OutcomeDistribution output_distribution(const ModeUnitary& u, const FockState& input);

// Expected photon fraction landing in `mode`; photons are unlabeled, so this
// is the only well-defined per-photon scattering marginal.
double per_photon_marginal(const OutcomeDistribution& dist, int mode);

struct NoSignallingReport {
  double marginal_base = 0.0;
  double marginal_added = 0.0;
  double difference = 0.0;
};

// Compares the per-photon marginal for `mode` before and after extra photons
// enter the other ports. `added_input` must dominate `base_input` mode-wise.
NoSignallingReport no_signalling_report(const ModeUnitary& u, const FockState& base_input,
                                        const FockState& added_input, int mode);

// Wire formats: {"dim": d, "re": [[..]], "im": [[..]]} for matrices,
// [{"occupations": [...], "p": x}, ...] for distributions.
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);
ModeUnitary unitary_from_json(const nlohmann::json& j);
FockState fock_state_from_json(const nlohmann::json& j, int expected_modes);
nlohmann::json distribution_to_json(const OutcomeDistribution& dist);
OutcomeDistribution distribution_from_json(const nlohmann::json& j);

}  // namespace ctxlab::fock

#endif
