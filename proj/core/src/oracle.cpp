#include "wban/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace wban {

namespace {
constexpr double kPi = std::numbers::pi;
}

double qpsk_ber(double gamma_b_linear) {
  if (!(gamma_b_linear >= 0.0))
    throw std::invalid_argument("qpsk_ber: gamma_b must be non-negative");
  return 0.5 * std::erfc(std::sqrt(gamma_b_linear));
}

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * gh.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * gh.nodes[1];
    else
      z = 2.0 * z - gh.nodes[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = 2.0 / (pp * pp);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  return gh;
}

double psk_phase_pdf(double phase, double rho) {
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return std::exp(-rho) / (2.0 * kPi) +
         0.5 / std::sqrt(kPi) * std::sqrt(rho) * c * std::exp(-rho * s * s) *
             std::erfc(-std::sqrt(rho) * c);
}

namespace {

template <typename F>
double simpson(F&& f, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  // seed split keeps narrow high-SNR lobes from being missed
  double acc = 0.0;
  const int seed = 8;
  double x0 = a, f0 = fa;
  for (int i = 1; i <= seed; ++i) {
    const double x1 = a + (b - a) * i / seed;
    const double f1 = f(x1);
    const double mid = 0.5 * (x0 + x1);
    const double fmid = f(mid);
    acc += adaptive_simpson(f, x0, x1, f0, fmid, f1,
                            simpson(f, x0, x1, f0, fmid, f1), tol / seed, 40);
    x0 = x1;
    f0 = f1;
  }
  (void)fm;
  (void)m;
  return acc;
}

int popcount_diff(int a, int b, int mask) {
  return std::popcount(static_cast<unsigned>((a ^ b) & mask));
}

}  // namespace

double conditional_ber(const Constellation& c, double snr_linear, BitClass cls) {
  if (!(snr_linear >= 0.0))
    throw std::invalid_argument("conditional_ber: SNR must be non-negative");
  const int m = c.order;
  const int k = c.bits_per_symbol;
  // bit masks within the label value (msb-first layout: HP bits high)
  const int hp_mask = ((1 << c.hp_bits_per_symbol) - 1) << c.lp_bits_per_symbol;
  const int lp_mask = (1 << c.lp_bits_per_symbol) - 1;
  int mask;
  int bits_in_class;
  switch (cls) {
    case BitClass::Hp: mask = hp_mask; bits_in_class = c.hp_bits_per_symbol; break;
    case BitClass::Lp: mask = lp_mask; bits_in_class = c.lp_bits_per_symbol; break;
    default: mask = hp_mask | lp_mask; bits_in_class = k; break;
  }
  if (bits_in_class == 0)
    throw std::invalid_argument("conditional_ber: constellation has no bits of that class");

  // ML regions for equal-energy PSK are angular wedges bounded by bisectors
  // of angle-adjacent points.
  std::vector<int> order(m);
  std::vector<double> ang(m);
  for (int i = 0; i < m; ++i) {
    order[i] = i;
    double a = std::arg(c.points[i]);
    if (a < 0) a += 2.0 * kPi;
    ang[i] = a;
  }
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ang[a] < ang[b]; });
  std::vector<double> bnd(m);  // bnd[k]: boundary after sorted point k
  for (int i = 0; i < m; ++i) {
    const double a0 = ang[order[i]];
    double a1 = ang[order[(i + 1) % m]];
    if (i + 1 == m) a1 += 2.0 * kPi;
    bnd[i] = 0.5 * (a0 + a1);
  }

  double total = 0.0;
  for (int si = 0; si < m; ++si) {
    const int sent = order[si];
    for (int ki = 0; ki < m; ++ki) {
      const int dec = order[ki];
      if (dec == sent) continue;
      const int diff = popcount_diff(c.labels[sent], c.labels[dec], mask);
      if (diff == 0) continue;
      const double lo = (ki == 0 ? bnd[m - 1] - 2.0 * kPi : bnd[ki - 1]) - ang[sent];
      const double hi = bnd[ki] - ang[sent];
      const double p = integrate(
          [&](double t) { return psk_phase_pdf(t, snr_linear); }, lo, hi);
      total += p * diff;
    }
  }
  return total / (m * bits_in_class);
}

double avg_ber_lognormal(const Constellation& c, double mean_snr_db,
                         double sigma_db, BitClass cls, int nodes) {
  if (!(sigma_db >= 0.0))
    throw std::invalid_argument("avg_ber_lognormal: sigma must be non-negative");
  if (sigma_db == 0.0)
    return conditional_ber(c, db_to_linear(mean_snr_db), cls);
  const GaussHermite gh = gauss_hermite(nodes);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double snr_db = mean_snr_db + std::sqrt(2.0) * sigma_db * gh.nodes[i];
    acc += gh.weights[i] * conditional_ber(c, db_to_linear(snr_db), cls);
  }
  return acc / std::sqrt(kPi);
}

BufferChain build_chain(ProtocolKind protocol, int capacity, double p) {
  if (capacity < 1) throw std::invalid_argument("build_chain: capacity must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("build_chain: p outside [0,1]");
  if (protocol != ProtocolKind::Protocol1 && protocol != ProtocolKind::Protocol1Star)
    throw std::invalid_argument("build_chain: only protocol1 / protocol1_star");
  BufferChain chain;
  chain.protocol = protocol;
  chain.capacity = capacity;
  chain.p = p;
  const int n = capacity + 1;
  chain.transition.assign(n, std::vector<double>(n, 0.0));
  const bool star = protocol == ProtocolKind::Protocol1Star;
  for (int i = 0; i <= capacity; ++i) {
    auto& row = chain.transition[i];
    if (i == 0) {
      const double up = star ? 1.0 : p;
      row[1] = up;
      row[0] = 1.0 - up;
    } else if (i == capacity) {
      const double down = star ? 1.0 : 1.0 - p;
      row[i - 1] = down;
      row[i] = 1.0 - down;
    } else {
      row[i + 1] = p;
      row[i - 1] = 1.0 - p;
    }
  }
  return chain;
}

namespace {

bool strongly_connected(const std::vector<std::vector<double>>& t) {
  const int n = static_cast<int>(t.size());
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        const double w = forward ? t[u][v] : t[v][u];
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          ++count;
          q.push(v);
        }
      }
    }
    return count == n;
  };
  return reach(true) && reach(false);
}

// Stationary distribution of a row-stochastic matrix via direct solve of
// pi (P - I) = 0 with the normalization constraint replacing one equation.
std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& t) {
  const int n = static_cast<int>(t.size());
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < n; ++row)
      a[col][row] = t[row][col] - (row == col ? 1.0 : 0.0);
  for (int col = 0; col < n; ++col) a[n - 1][col] = 1.0;
  a[n - 1][n] = 1.0;
  // Gaussian elimination with partial pivoting
  for (int i = 0; i < n; ++i) {
    int piv = i;
    for (int r = i + 1; r < n; ++r)
      if (std::abs(a[r][i]) > std::abs(a[piv][i])) piv = r;
    std::swap(a[i], a[piv]);
    if (std::abs(a[i][i]) < 1e-300)
      throw std::runtime_error("stationary_distribution: singular system");
    for (int r = i + 1; r < n; ++r) {
      const double f = a[r][i] / a[i][i];
      for (int col = i; col <= n; ++col) a[r][col] -= f * a[i][col];
    }
  }
  std::vector<double> pi(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double v = a[i][n];
    for (int col = i + 1; col < n; ++col) v -= a[i][col] * pi[col];
    pi[i] = v / a[i][i];
  }
  return pi;
}

}  // namespace

ChainStats chain_delay(const BufferChain& chain) {
  if (!strongly_connected(chain.transition))
    throw std::invalid_argument("chain_delay: chain is reducible");
  for (const auto& row : chain.transition) {
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("chain_delay: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("chain_delay: row does not sum to 1");
  }
  ChainStats stats;
  stats.stationary = stationary_distribution(chain.transition);
  if (chain.protocol == ProtocolKind::Protocol1Star) {
    stats.silent_probability = 0.0;
  } else {
    stats.silent_probability = stats.stationary.front() * (1.0 - chain.p) +
                               stats.stationary.back() * chain.p;
  }
  stats.avg_system_delay = 2.0 / (1.0 - stats.silent_probability);
  return stats;
}

namespace {

// P(link `which` attains the maximum among the Gaussian dB qualities in
// `mus`/`sigmas` restricted to indices in `mask`), by Gauss-Hermite.
double win_probability(const std::vector<double>& mus,
                       const std::vector<double>& sigmas, unsigned mask,
                       int which, const GaussHermite& gh) {
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double x = mus[which] + std::sqrt(2.0) * sigmas[which] * gh.nodes[i];
    double prod = 1.0;
    for (std::size_t m = 0; m < mus.size(); ++m) {
      if (m == static_cast<std::size_t>(which) || !(mask & (1u << m))) continue;
      prod *= normal_cdf((x - mus[m]) / sigmas[m]);
    }
    acc += gh.weights[i] * prod;
  }
  return acc / std::sqrt(kPi);
}

}  // namespace

MultiRelayChainStats multi_relay_chain(ProtocolKind protocol,
                                       const std::vector<MultiRelayLink>& links,
                                       double beta, int capacity) {
  if (protocol != ProtocolKind::Protocol2 &&
      protocol != ProtocolKind::ModifiedProtocol2)
    throw std::invalid_argument("multi_relay_chain: only protocol2 / modified_protocol2");
  const int n_relays = static_cast<int>(links.size());
  if (n_relays < 1 || n_relays > 15)
    throw std::invalid_argument("multi_relay_chain: bad relay count");
  if (capacity < 1) throw std::invalid_argument("multi_relay_chain: capacity < 1");
  if (!(beta > 0.0)) throw std::invalid_argument("multi_relay_chain: beta <= 0");
  double states_d = 1.0;
  for (int i = 0; i < n_relays; ++i) states_d *= capacity + 1;
  if (states_d > 1e4)
    throw std::invalid_argument("multi_relay_chain: state space above 10^4");
  const int n_states = static_cast<int>(states_d);
  const int n_links = 2 * n_relays;  // SR links first, then RD links

  std::vector<double> mus(n_links), sigmas(n_links);
  for (int i = 0; i < n_relays; ++i) {
    mus[i] = links[i].mu_sr_db;
    sigmas[i] = links[i].sigma_sr_db;
    mus[n_relays + i] = links[i].mu_rd_db + linear_to_db(beta);
    sigmas[n_relays + i] = links[i].sigma_rd_db;
  }
  const GaussHermite gh = gauss_hermite(64);

  std::vector<std::vector<double>> win_cache(1u << n_links);
  auto wins = [&](unsigned mask) -> const std::vector<double>& {
    auto& w = win_cache[mask];
    if (w.empty()) {
      w.assign(n_links, 0.0);
      for (int l = 0; l < n_links; ++l)
        if (mask & (1u << l)) w[l] = win_probability(mus, sigmas, mask, l, gh);
    }
    return w;
  };

  auto occupancy_of = [&](int state, int relay) {
    for (int i = 0; i < relay; ++i) state /= capacity + 1;
    return state % (capacity + 1);
  };

  std::vector<std::vector<double>> t(n_states, std::vector<double>(n_states, 0.0));
  std::vector<double> silent_in_state(n_states, 0.0);
  const unsigned all_mask = (1u << n_links) - 1;
  for (int s = 0; s < n_states; ++s) {
    unsigned avail = 0;
    for (int r = 0; r < n_relays; ++r) {
      const int occ = occupancy_of(s, r);
      if (occ < capacity) avail |= 1u << r;              // SR available
      if (occ > 0) avail |= 1u << (n_relays + r);        // RD available
    }
    const unsigned mask = protocol == ProtocolKind::Protocol2 ? all_mask : avail;
    const auto& w = wins(mask);
    int stride = 1;
    for (int r = 0; r < n_relays; ++r) {
      const int occ = occupancy_of(s, r);
      const double p_sr = w[r], p_rd = w[n_relays + r];
      if (mask & (1u << r)) {
        if (occ < capacity) t[s][s + stride] += p_sr;
        else silent_in_state[s] += p_sr;
      }
      if (mask & (1u << (n_relays + r))) {
        if (occ > 0) t[s][s - stride] += p_rd;
        else silent_in_state[s] += p_rd;
      }
      stride *= capacity + 1;
    }
    t[s][s] += silent_in_state[s];
  }

  MultiRelayChainStats stats;
  stats.stationary = stationary_distribution(t);
  double silent = 0.0;
  for (int s = 0; s < n_states; ++s)
    silent += stats.stationary[s] * silent_in_state[s];
  stats.silent_probability = silent;
  stats.avg_system_delay = 2.0 / (1.0 - silent);
  return stats;
}

}  // namespace wban
