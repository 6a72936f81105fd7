#include "cohercause/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cohercause/error.hpp"

namespace cohercause {
namespace {

std::vector<double> geometric(double c0, double ratio) {
  const std::size_t K = geometric_truncation(c0, ratio);
  std::vector<double> out(K);
  double v = c0;
  for (auto& e : out) {
    e = v;
    v *= ratio;
  }
  return out;
}

// sum_k c_k c_{k+|m|}
double autocorrelate(const std::vector<double>& c, int m) {
  const auto lag = static_cast<std::size_t>(std::abs(m));
  double acc = 0.0;
  for (std::size_t k = 0; k + lag < c.size(); ++k) acc += c[k] * c[k + lag];
  return acc;
}

LagSequence symmetric_sequence(std::size_t max_lag, const auto& f) {
  const int L = static_cast<int>(max_lag);
  LagSequence s{-L, std::vector<double>(2 * max_lag + 1)};
  for (int m = -L; m <= L; ++m) s.values[static_cast<std::size_t>(m + L)] = f(m);
  return s;
}

double lookup(const LagSequence& s, int m, const char* name) {
  if (!s.covers(m)) {
    std::ostringstream os;
    os << "lag range exceeded: " << name << "[" << m << "] is outside [" << s.min_lag << ", "
       << s.max_lag() << "]";
    throw InvalidArgument(os.str());
  }
  return s.at(m);
}

}  // namespace

std::size_t geometric_truncation(double c0, double ratio) {
  if (c0 == 0.0) return 0;
  if (ratio == 0.0 || std::abs(c0) < kCoefficientTail) return 1;
  if (std::abs(ratio) >= 1.0) throw InvalidArgument("geometric filter ratio must satisfy |ratio| < 1");
  return static_cast<std::size_t>(
      std::ceil(std::log(kCoefficientTail / std::abs(c0)) / std::log(std::abs(ratio))));
}

MAFilterSpec MAFilterSpec::demonstration(MACase which) {
  MAFilterSpec spec;
  switch (which) {
    case MACase::I:
      spec.coupling = {{0, 0.7}, {1, 0.8}, {2, 0.7}, {3, 0.6}};
      break;
    case MACase::II:
      spec.coupling = {{0, 0.7}, {-1, 0.8}, {-2, 0.7}, {-3, 0.3}};
      break;
    case MACase::III:
      spec.coupling = {{2, 0.4}, {1, 0.8}, {0, 0.7}, {-1, 0.8}, {-2, 0.4}};
      break;
  }
  return spec;
}

std::vector<double> MAFilterSpec::h() const { return geometric(h0, a); }
std::vector<double> MAFilterSpec::g() const { return geometric(g0, b); }

std::size_t MAFilterSpec::truncation() const {
  return std::max(geometric_truncation(h0, a), geometric_truncation(g0, b));
}

SequencePair gen_ma(const MAFilterSpec& spec, std::size_t length, std::uint64_t seed,
                    std::uint64_t stream) {
  const std::size_t K = spec.truncation();
  if (length <= 2 * K) {
    throw InvalidArgument("length " + std::to_string(length) + " is too short; need more than " +
                          std::to_string(2 * K) + " samples");
  }
  int past = 0;
  int future = 0;
  for (const auto& c : spec.coupling) {
    past = std::max(past, c.offset);
    future = std::max(future, -c.offset);
  }
  const std::size_t burn = std::max<std::size_t>(kBurnIn, K + static_cast<std::size_t>(past));
  const std::size_t total = burn + length + static_cast<std::size_t>(future);

  auto rng = make_rng(seed, stream);
  std::normal_distribution<double> normal;
  std::vector<double> mu(total), nu(total);
  for (std::size_t n = 0; n < total; ++n) {
    mu[n] = normal(rng);
    nu[n] = normal(rng);
  }

  const auto h = spec.h();
  const auto g = spec.g();
  auto filter = [](const std::vector<double>& coeff, const std::vector<double>& noise, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeff.size() && k <= n; ++k) acc += coeff[k] * noise[n - k];
    return acc;
  };

  std::vector<double> x_full(total);
  for (std::size_t n = 0; n < total; ++n) x_full[n] = filter(h, mu, n);

  SequencePair out;
  out.x.reserve(length);
  out.y.reserve(length);
  for (std::size_t n = burn; n < burn + length; ++n) {
    double y = filter(g, nu, n);
    for (const auto& c : spec.coupling) {
      y += c.coefficient * x_full[static_cast<std::size_t>(static_cast<long long>(n) - c.offset)];
    }
    out.x.push_back(x_full[n]);
    out.y.push_back(y);
  }
  return out;
}

SequencePair gen_ma_case(MACase which, std::size_t length, std::uint64_t seed, std::uint64_t stream) {
  return gen_ma(MAFilterSpec::demonstration(which), length, seed, stream);
}

CovarianceSequences analytic_covariances(const MAFilterSpec& spec, std::size_t max_lag) {
  const auto h = spec.h();
  const auto g = spec.g();
  auto rxx = [&](int m) { return autocorrelate(h, m); };

  CovarianceSequences out;
  out.xx = symmetric_sequence(max_lag, rxx);
  out.yy = symmetric_sequence(max_lag, [&](int m) {
    double acc = autocorrelate(g, m);
    for (const auto& k : spec.coupling) {
      for (const auto& l : spec.coupling) {
        acc += k.coefficient * l.coefficient * rxx(m + k.offset - l.offset);
      }
    }
    return acc;
  });
  out.xy = symmetric_sequence(max_lag, [&](int m) {
    double acc = 0.0;
    for (const auto& k : spec.coupling) acc += k.coefficient * rxx(m - k.offset);
    return acc;
  });
  return out;
}

CompositeCovariance lagged_covariance(const CovarianceSequences& model, const LagSpec& spec) {
  spec.validate();
  struct Sample {
    Channel channel;
    int lag;
  };
  std::vector<Sample> samples;
  for (const auto* role : {&spec.x_role, &spec.y_role, &spec.z_role}) {
    for (int lag : role->lags) samples.push_back({role->channel, lag});
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Matrix R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& a = samples[static_cast<std::size_t>(i)];
      const auto& b = samples[static_cast<std::size_t>(j)];
      // E[a_{t-la} b_{t-lb}] is the model covariance at lag la - lb.
      const int m = a.lag - b.lag;
      double v = 0.0;
      if (a.channel == Channel::x && b.channel == Channel::x) {
        v = lookup(model.xx, m, "Rxx");
      } else if (a.channel == Channel::y && b.channel == Channel::y) {
        v = lookup(model.yy, m, "Ryy");
      } else if (a.channel == Channel::x) {
        v = lookup(model.xy, m, "Rxy");
      } else {
        v = lookup(model.xy, -m, "Rxy");
      }
      R(i, j) = R(j, i) = v;
    }
  }
  return CompositeCovariance(std::move(R), spec.dims());
}

CompositeCovariance model_composite_covariance(const CovarianceSequences& model, int s, int t,
                                               Conditioning conditioning, std::size_t T_cond) {
  return lagged_covariance(model, LagSpec::pairwise(t - s, conditioning, T_cond));
}

CompositeCovariance model_composite_covariance(const MAFilterSpec& spec, int s, int t,
                                               Conditioning conditioning, std::size_t T_cond) {
  const auto max_lag = static_cast<std::size_t>(std::abs(t - s)) + T_cond + 1;
  return model_composite_covariance(analytic_covariances(spec, max_lag), s, t, conditioning, T_cond);
}

double BarnettModelSpec::c() const {
  if (coupling_override) return *coupling_override;
  const double eF = std::exp(F);
  return std::sqrt(std::exp(-F) * (eF - 1.0) * (eF - b * b));
}

void BarnettModelSpec::validate() const {
  if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) {
    throw InvalidArgument("Barnett model is unstable: need |a| < 1 and |b| < 1");
  }
  if (!(F >= 0.0)) throw InvalidArgument("transfer entropy F must be non-negative");
  if (!(std::exp(F) > b * b)) throw InvalidArgument("coupling is not real: need e^F > b^2");
}

Matrix barnett_state_covariance(const BarnettModelSpec& spec) {
  spec.validate();
  Eigen::Matrix2d A;
  A << spec.a, spec.c(), 0.0, spec.b;
  // vec(S) = (I - A (x) A)^{-1} vec(I), row-major vec.
  Eigen::Matrix4d K;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) K(i * 2 + j, k * 2 + l) = A(i, k) * A(j, l);
  const Eigen::Vector4d vecI(1.0, 0.0, 0.0, 1.0);
  const Eigen::Vector4d vecS = (Eigen::Matrix4d::Identity() - K).partialPivLu().solve(vecI);
  Matrix S(2, 2);
  S << vecS(0), vecS(1), vecS(2), vecS(3);
  return 0.5 * (S + S.transpose());
}

std::vector<double> binomial_ma_weights(double f, std::size_t r) {
  std::vector<double> w(r + 1);
  double binom = 1.0;
  double power = 1.0;
  for (std::size_t i = 0; i <= r; ++i) {
    w[i] = binom * power;
    binom = binom * static_cast<double>(r - i) / static_cast<double>(i + 1);
    power *= f;
  }
  return w;
}

BarnettProcess::BarnettProcess(const BarnettModelSpec& spec, Rng rng, BarnettInit init)
    : spec_(spec), rng_(std::move(rng)) {
  spec_.validate();
  c_ = spec_.c();
  alpha_ = binomial_ma_weights(spec_.f1, spec_.ma_order);
  beta_ = binomial_ma_weights(spec_.f2, spec_.ma_order);
  Eigen::LLT<Eigen::Matrix2d> llt(barnett_state_covariance(spec_));
  state_factor_ = llt.matrixL();
  restart(init);
}

void BarnettProcess::restart(BarnettInit init) {
  eta1_.assign(spec_.ma_order + 1, 0.0);
  eta2_.assign(spec_.ma_order + 1, 0.0);
  head_ = 0;
  std::size_t warmup = spec_.ma_order;
  if (init == BarnettInit::stationary) {
    const double e1 = normal_(rng_);
    const double e2 = normal_(rng_);
    eta1_[head_] = state_factor_(0, 0) * e1;
    eta2_[head_] = state_factor_(1, 0) * e1 + state_factor_(1, 1) * e2;
  } else {
    warmup += kBurnIn;
  }
  for (std::size_t i = 0; i < warmup; ++i) step();
}

void BarnettProcess::step() {
  const std::size_t size = eta1_.size();
  const std::size_t next = (head_ + 1) % size;
  const double mu = normal_(rng_);
  const double nu = normal_(rng_);
  eta1_[next] = spec_.a * eta1_[head_] + c_ * eta2_[head_] + mu;
  eta2_[next] = spec_.b * eta2_[head_] + nu;
  head_ = next;
}

void BarnettProcess::generate(std::size_t n, SequencePair& out) {
  const std::size_t size = eta1_.size();
  out.x.reserve(out.x.size() + n);
  out.y.reserve(out.y.size() + n);
  for (std::size_t k = 0; k < n; ++k) {
    step();
    double x = 0.0;
    double y = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t idx = (head_ + size - i) % size;
      y += alpha_[i] * eta1_[idx];
      x += beta_[i] * eta2_[idx];
    }
    out.x.push_back(x);
    out.y.push_back(y);
  }
}

SequencePair gen_barnett(const BarnettModelSpec& spec, std::size_t length, std::uint64_t seed,
                         std::uint64_t stream, BarnettInit init) {
  BarnettProcess process(spec, make_rng(seed, stream), init);
  SequencePair out;
  process.generate(length, out);
  return out;
}

CovarianceSequences barnett_covariances(const BarnettModelSpec& spec, std::size_t max_lag) {
  const Matrix S = barnett_state_covariance(spec);
  Eigen::Matrix2d A;
  A << spec.a, spec.c(), 0.0, spec.b;

  const auto alpha = binomial_ma_weights(spec.f1, spec.ma_order);
  const auto beta = binomial_ma_weights(spec.f2, spec.ma_order);
  const int r = static_cast<int>(spec.ma_order);
  const int D = static_cast<int>(max_lag) + r;

  // G[d] = E[eta_{n+d} eta_n^T] = A^d S for d >= 0.
  std::vector<Eigen::Matrix2d> G(static_cast<std::size_t>(D + 1));
  G[0] = S;
  for (int d = 1; d <= D; ++d) G[static_cast<std::size_t>(d)] = A * G[static_cast<std::size_t>(d - 1)];
  auto gamma = [&](int d, int row, int col) {
    return d >= 0 ? G[static_cast<std::size_t>(d)](row, col)
                  : G[static_cast<std::size_t>(-d)](col, row);
  };

  // E[w_n v_{n+m}] for w = sum_i wi eta[col]_{n-i}, v = sum_j vj eta[row]_{n-j}.
  auto cross = [&](const std::vector<double>& w, int col, const std::vector<double>& v, int row, int m) {
    double acc = 0.0;
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j <= r; ++j)
        acc += w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] * gamma(m - j + i, row, col);
    return acc;
  };

  CovarianceSequences out;
  out.xx = symmetric_sequence(max_lag, [&](int m) { return cross(beta, 1, beta, 1, m); });
  out.yy = symmetric_sequence(max_lag, [&](int m) { return cross(alpha, 0, alpha, 0, m); });
  out.xy = symmetric_sequence(max_lag, [&](int m) { return cross(beta, 1, alpha, 0, m); });
  return out;
}

CompositeCovariance barnett_composite_covariance(const BarnettModelSpec& spec, std::size_t T) {
  return lagged_covariance(barnett_covariances(spec, T), LagSpec::barnett(T));
}

}  // namespace cohercause
