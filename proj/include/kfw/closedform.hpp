#ifndef KFW_CLOSEDFORM_HPP
#define KFW_CLOSEDFORM_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "numeric.hpp"

// Resummed Hamiltonians in static homogeneous fields, to first order in the
// fields. gamma_pi is computed directly, so these hold past the radius of
// the series they resum.

namespace kfw
{

namespace detail
{

inline void require_mass(const PhysicalParams &p, const char *who)
{
	p.validate();
	if (!(p.m > 0.0)) {
		throw std::invalid_argument(std::string(who) + ": requires m > 0");
	}
}

} // namespace detail

/// sqrt(1 + (pi/mc)^2)
inline double gamma_pi(const PhysicalParams &p, const Vec3 &pi)
{
	detail::require_mass(p, "gamma_pi");
	return std::sqrt(1.0 + (pi / (p.m * p.c)).squaredNorm());
}

inline double kinetic_energy(const PhysicalParams &p, const Vec3 &pi)
{
	const double mc2 = p.m * p.c * p.c;
	return std::sqrt(mc2 * mc2 + p.c * p.c * pi.squaredNorm());
}

/// The vector W in H_spin = -s.W (orbital + T-BMT spin Hamiltonian).
inline Vec3 spin_precession_vector(const PhysicalParams &p, const FieldPoint &x)
{
	const double g = gamma_pi(p, x.pi);
	const double gp = p.gamma_m_prime();
	const double qmc = p.q / (p.m * p.c);
	const Vec3 u = x.pi / (p.m * p.c);
	return (gp + qmc / g) * x.B - gp / (g * (1.0 + g)) * u.dot(x.B) * u - (gp / g + qmc / (g * (1.0 + g))) * u.cross(x.E);
}

/// Classical H_orbit + H_spin for spin vector s.
inline double classical_H(const PhysicalParams &p, const FieldPoint &x, const Vec3 &s)
{
	detail::require_mass(p, "classical_H");
	return kinetic_energy(p, x.pi) + p.q * x.phi - s.dot(spin_precession_vector(p, x));
}

/// Classical H with |s| = hbar/2 enforced.
inline double classical_H_checked(const PhysicalParams &p, const FieldPoint &x, const Vec3 &s, double rtol = 1e-9)
{
	if (std::abs(s.norm() - p.hbar / 2) > rtol * p.hbar) {
		throw std::invalid_argument("classical_H: |s| must equal hbar/2");
	}
	return classical_H(p, x, s);
}

inline CMat2 HFW_closed(const PhysicalParams &p, const FieldPoint &x)
{
	detail::require_mass(p, "HFW_closed");
	const double g = gamma_pi(p, x.pi);
	const double k = p.q * p.hbar / (2 * p.m * p.c);
	const Vec3 u = x.pi / (p.m * p.c);
	CMat2 H = (p.q * x.phi + kinetic_energy(p, x.pi)) * CMat2::Identity();
	H -= k / g * sigma_dot(x.B);
	H += k * (1.0 / g - 1.0 / (1.0 + g)) * sigma_dot(u.cross(x.E));
	return H;
}

inline CMat2 calHFW_closed(const PhysicalParams &p, const FieldPoint &x)
{
	detail::require_mass(p, "calHFW_closed");
	const double g = gamma_pi(p, x.pi);
	const double k = p.q * p.hbar / (2 * p.m * p.c);
	const double mu = p.mu_prime;
	const Vec3 u = x.pi / (p.m * p.c);
	const Vec3 V = (mu + k / g) * x.B - mu / (g * (1.0 + g)) * u.dot(x.B) * u - (mu / g + k / (g * (1.0 + g))) * u.cross(x.E);
	return (kinetic_energy(p, x.pi) + p.q * x.phi) * CMat2::Identity() - sigma_dot(V);
}

struct ConjectureReport {
	std::string label = "conjecture, not verified";
	double darwin_term = 0.0;
};

/// Darwin-term magnitude (hbar^2/4mc)(q/2mc - gamma'_m) divE / gamma_pi of the
/// proposed inhomogeneous-field form. Reported, never asserted.
inline ConjectureReport conjectured_inhomogeneous_form(const PhysicalParams &p, const FieldPoint &x, double divE)
{
	detail::require_mass(p, "conjectured_inhomogeneous_form");
	ConjectureReport r;
	const double coef = p.q / (2 * p.m * p.c) - p.gamma_m_prime();
	r.darwin_term = p.hbar * p.hbar / (4 * p.m * p.c) * coef * divE / gamma_pi(p, x.pi);
	return r;
}

} // namespace kfw

#endif
