#include "wban/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace wban {

double path_loss_db(const ChannelParams& params, const LinkGeometry& geometry) {
  if (!(geometry.distance_mm > 0.0))
    throw std::invalid_argument("path_loss_db: distance must be positive");
  if (!(params.d0_mm > 0.0))
    throw std::invalid_argument("path_loss_db: d0_mm must be positive");
  return params.pl0_db +
         10.0 * params.exponent * std::log10(geometry.distance_mm / params.d0_mm);
}

ChannelGain draw_gain(const ChannelParams& params, const LinkGeometry& geometry,
                      RngStream& rng) {
  const double pl = path_loss_db(params, geometry);
  const double shadow_db = params.sigma_db * rng.normal();
  ChannelGain g;
  g.gain_db = -(pl + shadow_db);
  g.power_gain = db_to_linear(g.gain_db);
  return g;
}

double mean_quality_db(const ChannelParams& params, const LinkGeometry& geometry,
                       QualityMode mode) {
  return mode == QualityMode::Fading ? 0.0 : -path_loss_db(params, geometry);
}

double selection_probability(const LinkModel& sr, const LinkModel& rd,
                             double beta, QualityMode mode) {
  if (!(beta > 0.0))
    throw std::invalid_argument("selection_probability: beta must be positive");
  const double mu_sr = mean_quality_db(sr.params, sr.geometry, mode);
  const double mu_rd = mean_quality_db(rd.params, rd.geometry, mode);
  const double delta = mu_sr - mu_rd - linear_to_db(beta);
  const double var = sr.params.sigma_db * sr.params.sigma_db +
                     rd.params.sigma_db * rd.params.sigma_db;
  if (var == 0.0) return delta >= 0.0 ? 1.0 : 0.0;
  return normal_cdf(delta / std::sqrt(var));
}

}  // namespace wban
