#include "sqnls/smc.hpp"

#include <fstream>
#include <sstream>

#include "sqnls/errors.hpp"
#include "sqnls/trace.hpp"

namespace sqnls {

std::vector<double> simulate_data(const SSMTheta& theta, int n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("simulate_data: n must be >= 1");
  }
  const Eq31Model model{theta};
  Rng rng(seed);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  const double obs_std = std::sqrt(0.1);

  std::vector<double> y(n);
  double x = model.sample_initial(rng);
  for (int t = 1; t <= n; ++t) {
    x = model.transition_mean(x, t - 1) + model.transition_std() * std_normal(rng);
    y[t - 1] = 0.05 * x * x + obs_std * std_normal(rng);
  }
  return y;
}

PFResult bootstrap_pf(const SSMTheta& theta, const std::vector<double>& y,
                      int n_particles, std::uint64_t seed, Resampling scheme) {
  Rng rng(seed);
  return bootstrap_filter(Eq31Model{theta}, y, n_particles, rng, scheme);
}

Vector fisher_gradient(const SSMTheta& theta, const std::vector<double>& y,
                       int n_particles, std::uint64_t seed, Resampling scheme) {
  const Eq31Model model{theta};
  Rng rng(seed);
  const PFResult pf = bootstrap_filter(model, y, n_particles, rng, scheme);
  return fisher_path_gradient(model, y, pf);
}

namespace {

class SsmOracle final : public StochasticOracle {
 public:
  SsmOracle(std::vector<double> y, int n_particles, double scale, Resampling scheme)
      : y_(std::move(y)), n_particles_(n_particles), scale_(scale), scheme_(scheme) {
    if (n_particles_ < 2) {
      throw std::invalid_argument("ssm_oracle: need at least two particles");
    }
    if (!(scale_ > 0.0)) {
      throw std::invalid_argument("ssm_oracle: scale must be positive");
    }
  }

  int dim() const override { return 2; }

  AuxiliaryVariable sample_u(Rng& rng) const override {
    return AuxiliaryVariable::noise_seed(rng());
  }

  NoisyEval evaluate(const Vector& x, const AuxiliaryVariable& u) const override {
    return evaluate_with(x, u, n_particles_, u.seed());
  }

  double reference_cost(const Vector& x) const override {
    constexpr std::uint64_t kReferenceSeed = 0x5eed5eedULL;
    const int n_ref = std::max(n_particles_, 1000);
    return evaluate_with(x, AuxiliaryVariable::noise_seed(kReferenceSeed), n_ref,
                         kReferenceSeed)
        .f;
  }

 private:
  NoisyEval evaluate_with(const Vector& x, const AuxiliaryVariable& u, int n_particles,
                          std::uint64_t seed) const {
    if (x.size() != 2) {
      throw DimensionMismatch("ssm_oracle: x must be (b, log q)");
    }
    const SSMTheta theta{.b = x(0), .q = std::exp(x(1))};
    const Eq31Model model{theta};
    Rng rng(seed);
    const PFResult pf = bootstrap_filter(model, y_, n_particles, rng, scheme_);

    NoisyEval eval;
    eval.u = u;
    if (pf.degenerate) {
      eval.f = std::numeric_limits<double>::infinity();
      eval.g = Vector::Zero(2);
      return eval;
    }
    const Vector score = fisher_path_gradient(model, y_, pf);
    eval.f = -scale_ * pf.loglik;
    eval.g = Vector(2);
    eval.g(0) = -scale_ * score(0);
    eval.g(1) = -scale_ * theta.q * score(1);  // chain rule through q = exp(x2)
    return eval;
  }

  std::vector<double> y_;
  int n_particles_;
  double scale_;
  Resampling scheme_;
};

}  // namespace

std::unique_ptr<StochasticOracle> ssm_oracle(std::vector<double> y, int n_particles,
                                             double scale, Resampling scheme) {
  return std::make_unique<SsmOracle>(std::move(y), n_particles, scale, scheme);
}

void write_observations_csv(std::span<const double> y, std::ostream& os) {
  os << "t,y\n";
  for (std::size_t t = 0; t < y.size(); ++t) {
    os << (t + 1) << ',' << format_float(y[t]) << '\n';
  }
}

void write_observations_csv(std::span<const double> y, const std::string& path) {
  std::ofstream os(path);
  if (!os) {
    throw Error("write_observations_csv: cannot open " + path);
  }
  write_observations_csv(y, os);
}

std::vector<double> read_observations_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw Error("read_observations_csv: cannot open " + path);
  }
  std::vector<double> y;
  std::string line;
  std::getline(is, line);  // header
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("read_observations_csv: expected t,y", line_no);
    }
    y.push_back(std::stod(line.substr(comma + 1)));
  }
  return y;
}

}  // namespace sqnls
