#include "ctxlab/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "ctxlab/errors.hpp"

namespace ctxlab::fock {

namespace {

// Exact in double up to 16!.
double factorial(int n) {
  static const double table[] = {1.0,
                                 1.0,
                                 2.0,
                                 6.0,
                                 24.0,
                                 120.0,
                                 720.0,
                                 5040.0,
                                 40320.0,
                                 362880.0,
                                 3628800.0,
                                 39916800.0,
                                 479001600.0,
                                 6227020800.0,
                                 87178291200.0,
                                 1307674368000.0,
                                 20922789888000.0};
  return table[n];
}

std::vector<int> expand_modes(const FockState& s) {
  std::vector<int> modes;
  modes.reserve(static_cast<std::size_t>(s.total_photons()));
  for (int m = 0; m < s.modes(); ++m)
    for (int k = 0; k < s.occupations[static_cast<std::size_t>(m)]; ++k) modes.push_back(m);
  return modes;
}

double occupation_factorial_product(const FockState& s) {
  double prod = 1.0;
  for (int n : s.occupations) prod *= factorial(n);
  return prod;
}

void enumerate_occupations(int modes, int photons, std::vector<int>& prefix,
                           std::vector<FockState>& out) {
  if (modes == 1) {
    prefix.push_back(photons);
    out.push_back(FockState{prefix});
    prefix.pop_back();
    return;
  }
  for (int k = 0; k <= photons; ++k) {
    prefix.push_back(k);
    enumerate_occupations(modes - 1, photons - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

ModeUnitary::ModeUnitary(CMatrix u) : u_(std::move(u)) {
  if (!u_.square() || u_.rows() == 0) fail(errc::shape, "ModeUnitary: matrix must be square and non-empty");
  const CMatrix gram = u_ * u_.adjoint();
  const double dev = gram.max_abs_diff(CMatrix::identity(u_.rows()));
  if (dev > kUnitaryTol)
    fail(errc::validation, "ModeUnitary: U U^dag deviates from identity by " + std::to_string(dev));
}

ModeUnitary ModeUnitary::identity(int dim) { return ModeUnitary(CMatrix::identity(static_cast<std::size_t>(dim))); }

ModeUnitary ModeUnitary::beam_splitter_5050() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u(2, 2);
  u(0, 0) = s;
  u(0, 1) = s;
  u(1, 0) = s;
  u(1, 1) = -s;
  return ModeUnitary(std::move(u));
}

int FockState::total_photons() const {
  int total = 0;
  for (int n : occupations) total += n;
  return total;
}

void FockState::validate() const {
  if (occupations.empty()) fail(errc::validation, "FockState: no modes");
  for (int n : occupations)
    if (n < 0) fail(errc::validation, "FockState: negative occupation");
}

bool operator==(const FockState& a, const FockState& b) { return a.occupations == b.occupations; }

bool lex_less(const FockState& a, const FockState& b) {
  return std::lexicographical_compare(a.occupations.begin(), a.occupations.end(),
                                      b.occupations.begin(), b.occupations.end());
}

double OutcomeDistribution::probability_of(const FockState& s) const {
  for (const auto& [state, p] : support)
    if (state == s) return p;
  fail(errc::validation, "OutcomeDistribution: state not in support");
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const auto& [state, p] : support) sum += p;
  return sum;
}

cdouble permanent(const CMatrix& m) {
  if (!m.square()) fail(errc::shape, "permanent: matrix must be square");
  const int n = static_cast<int>(m.rows());
  if (n > kMaxPermanentDim) fail(errc::size_limit, "permanent: dimension exceeds 16");
  if (n == 0) return 1.0;

  // Ryser: Perm = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij.
  // Gray-code order touches one column per step, so the row sums update in O(n).
  std::vector<cdouble> row_sum(static_cast<std::size_t>(n), cdouble{});
  cdouble total = 0.0;
  std::uint32_t gray = 0;
  const std::uint32_t end = std::uint32_t{1} << n;
  for (std::uint32_t k = 1; k < end; ++k) {
    const std::uint32_t next = k ^ (k >> 1);
    const std::uint32_t changed = next ^ gray;
    const int col = std::countr_zero(changed);
    const double dir = (next & changed) ? 1.0 : -1.0;
    for (int r = 0; r < n; ++r)
      row_sum[static_cast<std::size_t>(r)] += dir * m(static_cast<std::size_t>(r), static_cast<std::size_t>(col));
    gray = next;

    cdouble prod = 1.0;
    for (int r = 0; r < n; ++r) prod *= row_sum[static_cast<std::size_t>(r)];
    const int popcount = std::popcount(next);
    total += (((n - popcount) & 1) == 0) ? prod : -prod;
  }
  return total;
}

double transition_probability(const ModeUnitary& u, const FockState& input, const FockState& output) {
  input.validate();
  output.validate();
  if (input.modes() != u.dim() || output.modes() != u.dim())
    fail(errc::shape, "transition_probability: state modes do not match unitary dimension");
  const int photons = input.total_photons();
  if (photons != output.total_photons())
    fail(errc::conservation, "transition_probability: photon numbers differ");
  if (photons < 1) fail(errc::validation, "transition_probability: need at least one photon");
  if (photons > kMaxPermanentDim) fail(errc::size_limit, "transition_probability: photon number exceeds 16");

  const std::vector<int> in_modes = expand_modes(input);
  const std::vector<int> out_modes = expand_modes(output);
  const std::size_t n = in_modes.size();
  CMatrix sub(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      sub(r, c) = u.matrix()(static_cast<std::size_t>(out_modes[r]), static_cast<std::size_t>(in_modes[c]));

  const double denom = occupation_factorial_product(input) * occupation_factorial_product(output);
  return std::norm(permanent(sub)) / denom;
}

OutcomeDistribution output_distribution(const ModeUnitary& u, const FockState& input) {
  input.validate();
  if (input.modes() != u.dim()) fail(errc::shape, "output_distribution: state modes do not match unitary dimension");
  const int photons = input.total_photons();
  if (photons < 1) fail(errc::validation, "output_distribution: need at least one photon");
  if (photons > kMaxPhotons) fail(errc::size_limit, "output_distribution: photon number exceeds 6");

  std::vector<FockState> patterns;
  std::vector<int> prefix;
  enumerate_occupations(u.dim(), photons, prefix, patterns);  // already lexicographic

  OutcomeDistribution dist;
  dist.support.reserve(patterns.size());
  for (const FockState& out : patterns)
    dist.support.emplace_back(out, transition_probability(u, input, out));

  const double total = dist.total();
  if (std::abs(total - 1.0) > kProbTol)
    fail(errc::internal, "output_distribution: probabilities sum to " + std::to_string(total));
  return dist;
}

double per_photon_marginal(const OutcomeDistribution& dist, int mode) {
  if (dist.support.empty()) fail(errc::validation, "per_photon_marginal: empty distribution");
  if (std::abs(dist.total() - 1.0) > kProbTol)
    fail(errc::validation, "per_photon_marginal: distribution not normalized");
  const FockState& first = dist.support.front().first;
  if (mode < 0 || mode >= first.modes()) fail(errc::validation, "per_photon_marginal: mode index out of range");
  const int photons = first.total_photons();

  double expected = 0.0;
  for (const auto& [state, p] : dist.support)
    expected += p * state.occupations[static_cast<std::size_t>(mode)];
  return expected / photons;
}

NoSignallingReport no_signalling_report(const ModeUnitary& u, const FockState& base_input,
                                        const FockState& added_input, int mode) {
  base_input.validate();
  added_input.validate();
  if (base_input.modes() != added_input.modes())
    fail(errc::shape, "no_signalling_report: inputs have different mode counts");
  for (int m = 0; m < base_input.modes(); ++m)
    if (added_input.occupations[static_cast<std::size_t>(m)] < base_input.occupations[static_cast<std::size_t>(m)])
      fail(errc::validation, "no_signalling_report: added_input must only add photons");

  NoSignallingReport report;
  report.marginal_base = per_photon_marginal(output_distribution(u, base_input), mode);
  report.marginal_added = per_photon_marginal(output_distribution(u, added_input), mode);
  report.difference = std::abs(report.marginal_base - report.marginal_added);
  return report;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
    fail(errc::validation, "matrix json: expected object with dim/re/im");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    fail(errc::validation, "matrix json: dim must be a positive integer");
  const auto d = j["dim"].get<std::size_t>();
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array() || re.size() != d || im.size() != d)
    fail(errc::validation, "matrix json: re/im must be dim x dim arrays");
  CMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    if (!re[r].is_array() || !im[r].is_array() || re[r].size() != d || im[r].size() != d)
      fail(errc::validation, "matrix json: re/im must be dim x dim arrays");
    for (std::size_t c = 0; c < d; ++c) {
      if (!re[r][c].is_number() || !im[r][c].is_number())
        fail(errc::validation, "matrix json: entries must be numbers");
      m(r, c) = cdouble(re[r][c].get<double>(), im[r][c].get<double>());
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ModeUnitary unitary_from_json(const nlohmann::json& j) { return ModeUnitary(matrix_from_json(j)); }

FockState fock_state_from_json(const nlohmann::json& j, int expected_modes) {
  if (!j.is_array()) fail(errc::validation, "fock state json: expected array of occupations");
  FockState s;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail(errc::validation, "fock state json: occupations must be integers");
    s.occupations.push_back(v.get<int>());
  }
  s.validate();
  if (expected_modes > 0 && s.modes() != expected_modes)
    fail(errc::validation, "fock state json: expected " + std::to_string(expected_modes) + " modes");
  return s;
}

nlohmann::json distribution_to_json(const OutcomeDistribution& dist) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [state, p] : dist.support)
    out.push_back({{"occupations", state.occupations}, {"p", p}});
  return out;
}

OutcomeDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(errc::validation, "distribution json: expected array");
  OutcomeDistribution dist;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("occupations") || !entry.contains("p"))
      fail(errc::validation, "distribution json: entries need occupations and p");
    FockState s = fock_state_from_json(entry["occupations"], 0);
    const double p = entry["p"].get<double>();
    if (p < -kProbTol || p > 1.0 + kProbTol) fail(errc::validation, "distribution json: probability out of range");
    dist.support.emplace_back(std::move(s), p);
  }
  if (std::abs(dist.total() - 1.0) > kProbTol) fail(errc::validation, "distribution json: probabilities do not sum to 1");
  return dist;
}

}  // namespace ctxlab::fock
