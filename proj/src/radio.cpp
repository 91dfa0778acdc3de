#include "uavnet/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavnet {

namespace {
constexpr double kLightSpeed = 3e8;
constexpr double kPi = std::numbers::pi;

struct Link {
  int uav;
  double sinr;
};

// Per-user candidate links, sorted by descending SINR (ties by UAV index).
std::vector<std::vector<Link>> candidate_links(const std::vector<Vec2>& users,
                                               const std::vector<Vec2>& uavs,
                                               const PhysicalConstants& c,
                                               double unit_m) {
  const double r_cov = coverage_radius(c.serving_altitude_m, c.aperture_rad());
  const double p_tx = dbm_to_linear_mw(c.tx_psd_dbm_hz);
  const double noise = dbm_to_linear_mw(c.noise_psd_dbm_hz);

  std::vector<std::vector<Link>> out(users.size());
  std::vector<double> gain(uavs.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    // gains of covering UAVs only; everyone else is screened by the disk
    double total = 0.0;
    std::vector<int> covering;
    for (std::size_t i = 0; i < uavs.size(); ++i) {
      const double horiz = distance(users[u], uavs[i]) * unit_m;
      if (horiz > r_cov) continue;
      const double d3 = std::sqrt(horiz * horiz +
                                  c.serving_altitude_m * c.serving_altitude_m);
      gain[i] = channel_gain(path_loss_db(d3, c.carrier_hz, c.excess_loss_db),
                             c.gain_convention);
      total += gain[i];
      covering.push_back(static_cast<int>(i));
    }
    for (int i : covering) {
      const double interf = p_tx * (total - gain[static_cast<std::size_t>(i)]);
      out[u].push_back(
          {i, p_tx * gain[static_cast<std::size_t>(i)] / (noise + interf)});
    }
    std::sort(out[u].begin(), out[u].end(), [](const Link& a, const Link& b) {
      if (a.sinr != b.sinr) return a.sinr > b.sinr;
      return a.uav < b.uav;
    });
  }
  return out;
}

}  // namespace

double coverage_radius(double altitude_m, double aperture_rad) {
  if (aperture_rad <= 0.0 || aperture_rad >= kPi)
    throw std::domain_error("aperture must lie in (0, pi)");
  return altitude_m * std::tan(aperture_rad / 2.0);
}

double path_loss_db(double distance_m, double carrier_hz, double excess_db) {
  if (distance_m <= 0.0)
    throw std::domain_error("path loss undefined at zero distance");
  return 20.0 * std::log10(4.0 * kPi * carrier_hz * distance_m / kLightSpeed) +
         excess_db;
}

double channel_gain(double pl_db, GainConvention conv) {
  const double divisor = conv == GainConvention::Amplitude ? 20.0 : 10.0;
  return std::pow(10.0, -pl_db / divisor);
}

double sinr(const Vec2& user, std::size_t serving, const std::vector<Vec2>& uavs,
            const PhysicalConstants& c, double unit_m) {
  const auto links = candidate_links({user}, uavs, c, unit_m);
  for (const auto& l : links[0])
    if (l.uav == static_cast<int>(serving)) return l.sinr;
  throw std::domain_error("serving UAV does not cover the user");
}

int rbs_needed(double sinr_linear, const PhysicalConstants& c) {
  const double per_rb = c.rb_bandwidth_hz * std::log2(1.0 + sinr_linear);
  const double cap = static_cast<double>(c.rb_count() + 1);
  if (per_rb <= 0.0) return c.rb_count() + 1;
  return static_cast<int>(std::min(std::ceil(c.min_throughput_bps / per_rb), cap));
}

AssociationMap associate_and_allocate(const std::vector<Vec2>& users,
                                      const std::vector<Vec2>& uavs,
                                      const PhysicalConstants& c,
                                      double unit_m) {
  AssociationMap map;
  map.users.resize(users.size());
  map.rbs_left.assign(uavs.size(), c.rb_count());

  const auto links = candidate_links(users, uavs, c, unit_m);

  // cheapest-to-serve users first: descending best SINR, ties by index
  std::vector<std::size_t> order;
  for (std::size_t u = 0; u < users.size(); ++u)
    if (!links[u].empty()) order.push_back(u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (links[a][0].sinr != links[b][0].sinr)
      return links[a][0].sinr > links[b][0].sinr;
    return a < b;
  });

  for (std::size_t u : order) {
    for (const auto& l : links[u]) {
      const int need = rbs_needed(l.sinr, c);
      auto& left = map.rbs_left[static_cast<std::size_t>(l.uav)];
      if (need > left) continue;
      left -= need;
      map.users[u] = {l.uav, need, true};
      break;
    }
  }
  return map;
}

double us_score(int served_count, double beta) {
  return std::pow(static_cast<double>(served_count), beta);
}

}  // namespace uavnet
