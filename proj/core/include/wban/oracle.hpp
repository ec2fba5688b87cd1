#pragma once

#include <vector>

#include "wban/modem.hpp"
#include "wban/protocol.hpp"

namespace wban {

enum class BitClass { Hp, Lp, Overall };

// Coherent Gray-QPSK bit error rate, Q(sqrt(2*gamma_b)).
double qpsk_ber(double gamma_b_linear);

// Gauss-Hermite abscissas/weights for integral over exp(-x^2).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// Phase-error density of a unit-energy PSK symbol in AWGN at symbol SNR rho.
double psk_phase_pdf(double phase, double rho);

// Exact (numerically integrated) conditional bit error rate of the given
// constellation at fixed symbol SNR, per bit class.
double conditional_ber(const Constellation& c, double snr_linear, BitClass cls);

// Conditional BER averaged over lognormal (Gaussian-in-dB) shadowing of the
// SNR via Gauss-Hermite quadrature.
double avg_ber_lognormal(const Constellation& c, double mean_snr_db,
                         double sigma_db, BitClass cls, int nodes = 48);

// Birth-death chain of one relay buffer's occupancy under protocol1 or
// protocol1_star, conditioned on the per-slot SR-wins probability p.
struct BufferChain {
  ProtocolKind protocol = ProtocolKind::Protocol1;
  int capacity = 1;
  double p = 0.5;
  std::vector<std::vector<double>> transition;  // (L+1) x (L+1), row stochastic
};

struct ChainStats {
  double avg_system_delay = 0.0;
  double silent_probability = 0.0;
  std::vector<double> stationary;
};

BufferChain build_chain(ProtocolKind protocol, int capacity, double p);
ChainStats chain_delay(const BufferChain& chain);

// Joint-occupancy chain for the multi-relay strategies, built from exact
// win probabilities among independent Gaussian-in-dB link qualities.
// State space is (L+1)^N; rejected above 10^4 states.
struct MultiRelayLink {
  double mu_sr_db = 0.0;
  double sigma_sr_db = 1.0;
  double mu_rd_db = 0.0;
  double sigma_rd_db = 1.0;
};

struct MultiRelayChainStats {
  double avg_system_delay = 0.0;
  double silent_probability = 0.0;
  std::vector<double> stationary;  // indexed by mixed-radix joint state
};

MultiRelayChainStats multi_relay_chain(ProtocolKind protocol,
                                       const std::vector<MultiRelayLink>& links,
                                       double beta, int capacity);

}  // namespace wban
