#include "wgsta/model.hpp"

#include "wgsta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wgsta {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw ArgumentError(what);
    }
}

} // namespace

void ModelParams::validate() const
{
    require(std::isfinite(omega0) && omega0 >= 0.0, "omega0 must be finite and >= 0");
    require(std::isfinite(delta0) && delta0 >= 0.0, "delta0 must be finite and >= 0");
    require(std::isfinite(half_length) && half_length > 0.0, "half_length must be finite and > 0");
}

SignFlipSchedule::SignFlipSchedule(double amplitude, double left_mismatch, double half_length)
    : amplitude_(amplitude), left_mismatch_(left_mismatch), half_length_(half_length),
      wavenumber_(2.0 * std::numbers::pi / half_length)
{
    require(std::isfinite(amplitude) && amplitude > 0.0, "schedule requires omega0 > 0");
    require(std::isfinite(left_mismatch), "mismatch must be finite");
    require(std::isfinite(half_length) && half_length > 0.0, "half_length must be > 0");
}

SignFlipSchedule::SignFlipSchedule(const ModelParams& p)
    : SignFlipSchedule(p.omega0, p.delta0, p.half_length)
{
    p.validate();
}

double SignFlipSchedule::coupling(double z) const noexcept
{
    return amplitude_ / std::cosh(wavenumber_ * z);
}

double SignFlipSchedule::coupling_rate(double z) const noexcept
{
    const double u = wavenumber_ * z;
    return -amplitude_ * wavenumber_ * std::tanh(u) / std::cosh(u);
}

double SignFlipSchedule::coupling_curvature(double z) const noexcept
{
    const double u = wavenumber_ * z;
    const double sech = 1.0 / std::cosh(u);
    const double tanh = std::tanh(u);
    return amplitude_ * wavenumber_ * wavenumber_ * sech * (tanh * tanh - sech * sech);
}

double SignFlipSchedule::mismatch(double z, Side side) const
{
    if (z < 0.0) {
        return left_mismatch_;
    }
    if (z > 0.0) {
        return -left_mismatch_;
    }
    switch (side) {
    case Side::left:
        return left_mismatch_;
    case Side::right:
        return -left_mismatch_;
    case Side::none:
        break;
    }
    throw DiscontinuityError(z);
}

double SignFlipSchedule::cd_coupling(double z, Side side) const
{
    const double delta = mismatch(z, side);
    const double omega = coupling(z);
    return coupling_rate(z) * delta / (2.0 * (omega * omega + delta * delta));
}

SchedulePoint SignFlipSchedule::point(double z, Side side) const
{
    SchedulePoint pt;
    pt.z = z;
    pt.delta = mismatch(z, side);
    pt.omega = coupling(z);
    pt.theta = mixing_angle(pt.omega, pt.delta);

    const double rate = coupling_rate(z);
    const double curvature = coupling_curvature(z);
    const double denom = pt.omega * pt.omega + pt.delta * pt.delta;
    pt.omega_a = rate * pt.delta / (2.0 * denom);

    // d/dz of omega_a with delta piecewise constant.
    const double omega_a_rate =
        0.5 * pt.delta * (curvature * denom - 2.0 * pt.omega * rate * rate) / (denom * denom);

    pt.phi = std::atan2(pt.omega_a, pt.omega);
    const double rot = pt.omega * pt.omega + pt.omega_a * pt.omega_a;
    pt.phi_rate = (omega_a_rate * pt.omega - rate * pt.omega_a) / rot;

    pt.omega_eff = std::hypot(pt.omega, pt.omega_a);
    pt.delta_eff = pt.delta - 0.5 * pt.phi_rate;
    return pt;
}

RawValues raw_schedule(const ModelParams& p, double z, Side side)
{
    const SignFlipSchedule s(p);
    return {s.coupling(z), s.mismatch(z, side)};
}

double mixing_angle(double omega, double delta)
{
    if (omega == 0.0 && delta == 0.0) {
        throw UndefinedAngleError();
    }
    return std::atan2(omega, delta);
}

double cd_coupling(const ModelParams& p, double z, Side side)
{
    return SignFlipSchedule(p).cd_coupling(z, side);
}

SchedulePoint effective_schedule(const ModelParams& p, double z, Side side)
{
    return SignFlipSchedule(p).point(z, side);
}

Diagnostics diagnostics(const ModelParams& p, std::size_t samples)
{
    require(samples >= 2, "diagnostics needs at least 2 samples");
    const SignFlipSchedule s(p);
    const double L = p.half_length;

    Diagnostics d;
    auto visit = [&](double z, Side side) {
        const double omega = s.coupling(z);
        const double delta = s.mismatch(z, side);
        const double omega_a = std::abs(s.cd_coupling(z, side));
        d.max_adiabaticity_ratio =
            std::max(d.max_adiabaticity_ratio, omega_a / std::hypot(omega, delta));
        d.max_cd_ratio = std::max(d.max_cd_ratio, omega_a / omega);
    };

    for (std::size_t k = 0; k < samples; ++k) {
        const double z = k + 1 == samples
                             ? L
                             : -L + 2.0 * L * static_cast<double>(k) / static_cast<double>(samples - 1);
        if (z == 0.0) {
            visit(z, Side::left);
            visit(z, Side::right);
        } else {
            visit(z, Side::none);
        }
    }
    d.bound_satisfied = d.max_cd_ratio <= 1.0 + 1e-12;
    return d;
}

Geometry geometry_synthesis(const SchedulePoint& point, const GeometryCalibration& calib)
{
    require(calib.coupling_at_contact > 0.0 && calib.decay_rate > 0.0 &&
                calib.mismatch_per_width > 0.0,
            "geometry calibration constants must be > 0");
    if (point.omega_eff <= 0.0) {
        throw CalibrationError(CalibrationError::Reason::infinite_separation,
                               "zero coupling needs an infinite waveguide separation");
    }
    if (point.omega_eff > calib.coupling_at_contact) {
        throw CalibrationError(CalibrationError::Reason::outside_domain,
                               "coupling " + std::to_string(point.omega_eff) +
                                   " exceeds the calibrated maximum " +
                                   std::to_string(calib.coupling_at_contact));
    }
    Geometry g;
    g.separation = std::log(calib.coupling_at_contact / point.omega_eff) / calib.decay_rate;
    g.width_difference = point.delta_eff / calib.mismatch_per_width;
    return g;
}

} // namespace wgsta
