#include "dsr/radio.hpp"

#include <cmath>

#include "dsr/angles.hpp"

namespace dsr {

double RadioParams::free_space_l0(double wavelength_m) {
    const double x = wavelength_m / (4.0 * kPi);
    return x * x;
}

void RadioParams::validate() const {
    if (!(alpha > 2.0)) throw std::invalid_argument("radio.alpha must be > 2 (interference integrals diverge otherwise)");
    if (!(p_g_w > 0.0)) throw std::invalid_argument("radio.p_g_w must be > 0");
    if (p_l_w < 0.0) throw std::invalid_argument("radio.p_l_w must be >= 0");
    if (!(noise_psd_w_hz > 0.0)) throw std::invalid_argument("radio.noise_psd must be > 0");
    if (!(eta >= 1.0)) throw std::invalid_argument("radio.eta must be >= 1 (0 dB)");
    if (!(wavelength_m > 0.0) && !(l0 > 0.0))
        throw std::invalid_argument("radio: either wavelength or l0 must be positive");
}

double AntennaPattern::floor_angle_rad() const {
    return deg_to_rad(beamwidth_deg * std::sqrt(floor_db / 12.0));
}

double antenna_gain(const AntennaPattern& p, double phi) {
    if (p.kind == AntennaPattern::Kind::omni) return 1.0;
    const double deg = std::abs(rad_to_deg(wrap_pi(phi)));
    const double x = deg / p.beamwidth_deg;
    const double att_db = std::min(12.0 * x * x, p.floor_db);
    return std::pow(10.0, -att_db / 10.0);
}

double antenna_gain_integral(const AntennaPattern& p, const QuadratureSpec& spec) {
    if (p.kind == AntennaPattern::Kind::omni) return kTwoPi;
    const double phi_f = p.floor_angle_rad();
    const double main = integrate([&p](double phi) { return antenna_gain(p, phi); }, 0.0, phi_f, spec);
    const double floor_gain = std::pow(10.0, -p.floor_db / 10.0);
    return 2.0 * (main + (kPi - phi_f) * floor_gain);
}

double path_gain(const RadioParams& rp, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("path_gain: r must be > 0");
    return rp.effective_l0() * std::pow(r, -rp.alpha);
}

double noise_power(const RadioParams& rp, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("noise_power: bandwidth must be > 0");
    return rp.noise_psd_w_hz * bandwidth_hz;
}

double draw_fade(const FadingModel& f, Rng& rng) {
    switch (f.kind) {
        case FadingModel::Kind::deterministic_unit:
            return 1.0;
        case FadingModel::Kind::rayleigh:
            return rng.exp1();
    }
    return 1.0;
}

}  // namespace dsr
