#pragma once

#include <cstddef>
#include <cstdint>

namespace dchne {

using Joules = double;
using Meters = double;
using Bits = std::uint64_t;

// First-order radio coefficients. Defaults are the reference deployment:
// 40 nJ/bit electronics, 9 pJ/bit/m^2 free space, 0.0011 pJ/bit/m^4 two-ray,
// 6 nJ/bit/message aggregation. Scheduling reuses the radio electronics cost.
struct EnergyParams {
  double e_radio = 40e-9;
  double e_amp = 9e-12;
  double e_mh = 0.0011e-12;
  double e_sched = 40e-9;
  double e_agg = 6e-9;

  // Throws ConfigError unless every coefficient is finite and >= 0.
  void validate() const;
};

// Control message sizes in bits (25 bytes each by default).
struct ControlMessageSizes {
  Bits d_adv = 200;
  Bits d_syn = 200;
  Bits d_join = 200;
  Bits d_preamble = 200;
  Bits d_announce = 200;

  // Throws ConfigError if any size is zero.
  void validate() const;
};

// Network geometry the cost formulas depend on: arena side A, sensor count S
// and cluster count C.
struct NetworkShape {
  Meters area_side = 350.0;
  std::size_t nodes = 190;
  std::size_t clusters = 10;
};

// Member -> head transmission over the expected intra-cluster distance:
//   d*E_radio + d*E_amp*A^2/(2*pi*C)
Joules tx_intra(Bits d, Meters area_side, std::size_t clusters, const EnergyParams& p);

// Head -> base station over distance r with two-ray fading:
//   d*E_radio + d*E_mh*r^4
Joules tx_to_bs(Bits d, Meters r, const EnergyParams& p);

// Head receiving one d-bit message from each of the S/C - 1 expected members.
// S/C is real-valued. Throws std::invalid_argument when c == 0 or s < c.
Joules rx_cluster(Bits d, std::size_t s, std::size_t c, const EnergyParams& p);

// Same shape as rx_cluster with E_sched in place of E_radio.
Joules sched_energy(Bits d, std::size_t s, std::size_t c, const EnergyParams& p);

// Head's share of the adv/syn/join handshake: for each message, one
// transmission plus the cluster's replies.
Joules setup_energy_chn(const ControlMessageSizes& msgs, const NetworkShape& net,
                        const EnergyParams& p);

// Member's share of the handshake: receive adv, send join, receive syn.
Joules setup_energy_nchn(const ControlMessageSizes& msgs, const NetworkShape& net,
                         const EnergyParams& p);

// One frame of head activity: receive and aggregate n_members packets,
// schedule the cluster and forward one aggregated packet to the base station.
Joules frame_consumption_chn(std::size_t n_members, Bits d_size, Meters r_bs,
                             const NetworkShape& net, const EnergyParams& p);

// One frame of member activity: n_packets transmissions to the head.
Joules frame_consumption_nchn(Bits d_size, std::size_t n_packets, const NetworkShape& net,
                              const EnergyParams& p);

}  // namespace dchne
