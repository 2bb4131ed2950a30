#pragma once

#include <stdexcept>

#include "dsr/quadrature.hpp"
#include "dsr/rng.hpp"

namespace dsr {

struct RadioParams {
    double p_g_w = 40.0;           ///< GSM macro BS transmit power (W)
    double p_l_w = 0.0;            ///< LTE small-cell transmit power (W); usually calibrated
    double l0 = 0.0;               ///< path gain at 1 m (linear); 0 selects free space
    double alpha = 3.0;            ///< path-loss exponent, must be > 2
    double noise_psd_w_hz = 3.9810717055349695e-21;  ///< -174 dBm/Hz
    double eta = 1.9952623149688795;                 ///< Shannon gap, linear (3 dB)
    double wavelength_m = 0.375;

    static double free_space_l0(double wavelength_m);

    double effective_l0() const { return l0 > 0.0 ? l0 : free_space_l0(wavelength_m); }
    double p_g_hat() const { return p_g_w * effective_l0(); }
    double p_l_hat() const { return p_l_w * effective_l0(); }

    void validate() const;
};

struct FadingModel {
    enum class Kind { deterministic_unit, rayleigh };
    Kind kind = Kind::rayleigh;
};

struct AntennaPattern {
    enum class Kind { omni, tri_sector_3gpp };
    Kind kind = Kind::tri_sector_3gpp;
    double beamwidth_deg = 70.0;
    double floor_db = 20.0;

    /// Offset (rad) beyond which the pattern sits at its floor.
    double floor_angle_rad() const;
};

/// Linear gain of the pattern at azimuth offset phi (rad), normalized into (-pi, pi].
double antenna_gain(const AntennaPattern& p, double phi);

/// Integral of the gain over a full turn of azimuth offsets.
double antenna_gain_integral(const AntennaPattern& p, const QuadratureSpec& spec);

/// l(r) scaled by the 1 m constant: L0 * r^-alpha. Rejects r <= 0.
double path_gain(const RadioParams& rp, double r);

/// Thermal noise power over the given bandwidth. Rejects bandwidth <= 0.
double noise_power(const RadioParams& rp, double bandwidth_hz);

/// One fading power-gain draw; deterministic_unit always returns 1.
double draw_fade(const FadingModel& f, Rng& rng);

}  // namespace dsr
