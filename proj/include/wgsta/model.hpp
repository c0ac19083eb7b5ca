#pragma once

// Sign-flip phase-mismatch coupler model and its counterdiabatic correction.
//
// Coupling  Omega(z) = omega0 * sech(2 pi z / L)
// Mismatch  Delta(z) = +delta0 for z < 0, -delta0 for z > 0
//
// The counterdiabatic term Omega_a = theta'/2 (tan theta = Omega / Delta) makes the
// evolution follow the instantaneous eigenstates exactly within each half of the
// device. A diagonal phase rotation by phi = atan2(Omega_a, Omega) turns the complex
// corrected coupling back into a real one:
//
//   Omega_eff = sqrt(Omega^2 + Omega_a^2),   Delta_eff = Delta - phi'/2.
//
// Units: z in mm, every rate in 1/mm.

#include <cstddef>

namespace wgsta {

// One-sided evaluation tag. Only meaningful on a discontinuity (z = 0);
// `left` is the limit z -> 0-, `right` the limit z -> 0+.
enum class Side { none, left, right };

constexpr Side opposite(Side s) noexcept
{
    return s == Side::left ? Side::right : s == Side::right ? Side::left : Side::none;
}

struct ModelParams {
    double omega0 = 0.0;      // peak coupling, 1/mm
    double delta0 = 0.0;      // mismatch magnitude, 1/mm
    double half_length = 0.0; // L, mm; the device spans [-L, L]
    bool sta = false;         // use the counterdiabatic (effective) schedule

    double total_length() const noexcept { return 2.0 * half_length; }

    static ModelParams with_total_length(double omega0, double delta0, double total_length,
                                         bool sta = false)
    {
        return {omega0, delta0, 0.5 * total_length, sta};
    }

    // Throws ArgumentError unless omega0 >= 0, delta0 >= 0, half_length > 0 (all finite).
    // omega0 = 0 passes: simulations treat it as two decoupled guides, but every
    // schedule operation below still requires omega0 > 0.
    void validate() const;
};

struct SchedulePoint {
    double z = 0.0;
    double omega = 0.0;      // raw coupling
    double delta = 0.0;      // raw mismatch (one-sided at z = 0)
    double omega_a = 0.0;    // counterdiabatic coupling theta'/2
    double phi = 0.0;        // atan2(omega_a, omega)
    double theta = 0.0;      // atan2(omega, delta), in (0, pi)
    double phi_rate = 0.0;   // d phi / dz
    double omega_eff = 0.0;  // sqrt(omega^2 + omega_a^2)
    double delta_eff = 0.0;  // delta - phi_rate / 2
};

struct RawValues {
    double omega;
    double delta;
};

// Closed-form evaluator for a sech coupling with a mismatch that flips sign at z = 0.
//
// Unlike ModelParams, `left_mismatch` is signed: it is the value of Delta on z < 0.
// The three-guide splitter uses this to run the same construction on its
// trace-shifted bright-state system, where the mismatch starts negative.
class SignFlipSchedule {
public:
    SignFlipSchedule(double amplitude, double left_mismatch, double half_length);
    explicit SignFlipSchedule(const ModelParams& p);

    double amplitude() const noexcept { return amplitude_; }
    double left_mismatch() const noexcept { return left_mismatch_; }
    double half_length() const noexcept { return half_length_; }

    double coupling(double z) const noexcept;
    double coupling_rate(double z) const noexcept;      // dOmega/dz
    double coupling_curvature(double z) const noexcept; // d2Omega/dz2

    // Throws DiscontinuityError for z == 0 with Side::none. Away from zero the
    // sign of z decides and the tag is ignored.
    double mismatch(double z, Side side = Side::none) const;

    // theta'/2 = Omega' Delta / (2 (Omega^2 + Delta^2)); Delta' = 0 away from the jump.
    double cd_coupling(double z, Side side = Side::none) const;

    // Full effective-schedule evaluation with analytic phi'.
    SchedulePoint point(double z, Side side = Side::none) const;

private:
    double amplitude_;
    double left_mismatch_;
    double half_length_;
    double wavenumber_; // 2 pi / L
};

// Raw (uncorrected) coupling and mismatch.
RawValues raw_schedule(const ModelParams& p, double z, Side side = Side::none);

// theta = atan2(omega, delta); in (0, pi) whenever omega > 0.
double mixing_angle(double omega, double delta);

double cd_coupling(const ModelParams& p, double z, Side side = Side::none);

SchedulePoint effective_schedule(const ModelParams& p, double z, Side side = Side::none);

struct Diagnostics {
    double max_adiabaticity_ratio = 0.0; // max |theta'/2| / sqrt(Omega^2 + Delta^2)
    double max_cd_ratio = 0.0;           // max |Omega_a| / |Omega|
    bool bound_satisfied = true;         // max_cd_ratio <= 1 (+1e-12)
};

// Maxima over a uniform grid of `samples` points on [-L, L]. A grid point that
// lands on z = 0 is evaluated from both sides.
Diagnostics diagnostics(const ModelParams& p, std::size_t samples);

// Geometry calibration. Coupling falls off with separation as A exp(-gamma d);
// the mismatch is linear in the width difference with slope k.
struct GeometryCalibration {
    double coupling_at_contact = 0.0; // A, 1/mm
    double decay_rate = 0.0;          // gamma, 1/mm
    double mismatch_per_width = 0.0;  // k, 1/(mm um)
};

struct Geometry {
    double separation = 0.0;       // d, mm
    double width_difference = 0.0; // W1 - W2, um
};

Geometry geometry_synthesis(const SchedulePoint& point, const GeometryCalibration& calib);

} // namespace wgsta
