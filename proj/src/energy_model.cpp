#include "dchne/energy_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dchne/errors.hpp"

namespace dchne {

namespace {

void require_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ConfigError(std::string("energy parameter ") + name + " must be finite and >= 0");
  }
}

double members_per_cluster(std::size_t s, std::size_t c) {
  if (c == 0) throw std::invalid_argument("cluster count must be >= 1");
  if (s < c) throw std::invalid_argument("node count must be >= cluster count");
  return static_cast<double>(s) / static_cast<double>(c) - 1.0;
}

}  // namespace

void EnergyParams::validate() const {
  require_finite_nonneg(e_radio, "e_radio");
  require_finite_nonneg(e_amp, "e_amp");
  require_finite_nonneg(e_mh, "e_mh");
  require_finite_nonneg(e_sched, "e_sched");
  require_finite_nonneg(e_agg, "e_agg");
}

void ControlMessageSizes::validate() const {
  if (d_adv == 0 || d_syn == 0 || d_join == 0 || d_preamble == 0 || d_announce == 0) {
    throw ConfigError("control message sizes must be > 0 bits");
  }
}

Joules tx_intra(Bits d, Meters area_side, std::size_t clusters, const EnergyParams& p) {
  if (clusters == 0) throw std::invalid_argument("tx_intra: cluster count must be >= 1");
  if (!(area_side >= 0.0)) throw std::invalid_argument("tx_intra: area side must be >= 0");
  const double bits = static_cast<double>(d);
  const double mean_sq_dist =
      area_side * area_side / (2.0 * std::numbers::pi * static_cast<double>(clusters));
  return bits * p.e_radio + bits * p.e_amp * mean_sq_dist;
}

Joules tx_to_bs(Bits d, Meters r, const EnergyParams& p) {
  if (!(r >= 0.0)) throw std::invalid_argument("tx_to_bs: distance must be >= 0");
  const double bits = static_cast<double>(d);
  const double r2 = r * r;
  return bits * p.e_radio + bits * p.e_mh * r2 * r2;
}

Joules rx_cluster(Bits d, std::size_t s, std::size_t c, const EnergyParams& p) {
  return static_cast<double>(d) * p.e_radio * members_per_cluster(s, c);
}

Joules sched_energy(Bits d, std::size_t s, std::size_t c, const EnergyParams& p) {
  return static_cast<double>(d) * p.e_sched * members_per_cluster(s, c);
}

Joules setup_energy_chn(const ControlMessageSizes& msgs, const NetworkShape& net,
                        const EnergyParams& p) {
  Joules total = 0.0;
  for (Bits size : {msgs.d_adv, msgs.d_syn, msgs.d_join}) {
    total += tx_intra(size, net.area_side, net.clusters, p);
    total += rx_cluster(size, net.nodes, net.clusters, p);
  }
  return total;
}

Joules setup_energy_nchn(const ControlMessageSizes& msgs, const NetworkShape& net,
                         const EnergyParams& p) {
  return static_cast<double>(msgs.d_adv) * p.e_radio +
         tx_intra(msgs.d_join, net.area_side, net.clusters, p) +
         static_cast<double>(msgs.d_syn) * p.e_radio;
}

Joules frame_consumption_chn(std::size_t n_members, Bits d_size, Meters r_bs,
                             const NetworkShape& net, const EnergyParams& p) {
  const double received_bits = static_cast<double>(n_members) * static_cast<double>(d_size);
  return received_bits * p.e_radio + received_bits * p.e_agg +
         sched_energy(d_size, net.nodes, net.clusters, p) + tx_to_bs(d_size, r_bs, p);
}

Joules frame_consumption_nchn(Bits d_size, std::size_t n_packets, const NetworkShape& net,
                              const EnergyParams& p) {
  if (n_packets == 0) return 0.0;
  return static_cast<double>(n_packets) * tx_intra(d_size, net.area_side, net.clusters, p);
}

}  // namespace dchne
