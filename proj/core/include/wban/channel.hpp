#pragma once

#include "wban/util.hpp"

namespace wban {

enum class LinkKind { InBodyToOnBody, OnBodyToOnBody };

struct LinkGeometry {
  LinkKind kind = LinkKind::InBodyToOnBody;
  double distance_mm = 0.0;
};

// Log-distance path-loss law with lognormal shadowing. The shipped defaults
// are replaceable calibration constants (see configs/).
struct ChannelParams {
  double pl0_db = 0.0;    // reference path loss at d0_mm
  double d0_mm = 1.0;     // reference distance
  double exponent = 2.0;  // path-loss exponent
  double sigma_db = 0.0;  // shadowing standard deviation
};

struct ChannelGain {
  double power_gain = 0.0;  // linear rx/tx power ratio
  double gain_db = 0.0;
};

// Whether protocol decisions see the absolute power gain or only the
// shadowing (fading) component normalized by mean path loss.
enum class QualityMode { Fading, Absolute };

struct LinkModel {
  ChannelParams params;
  LinkGeometry geometry;
};

double path_loss_db(const ChannelParams& params, const LinkGeometry& geometry);

ChannelGain draw_gain(const ChannelParams& params, const LinkGeometry& geometry,
                      RngStream& rng);

// Mean link quality in dB under the given mode (0 for fading-only).
double mean_quality_db(const ChannelParams& params, const LinkGeometry& geometry,
                       QualityMode mode);

// Closed-form P(Q_sr > beta * Q_rd) for lognormal link qualities. Degenerate
// (both sigmas zero) cases resolve by direct comparison of the means.
double selection_probability(const LinkModel& sr, const LinkModel& rd,
                             double beta, QualityMode mode);

}  // namespace wban
