#include "epadm/eos.hpp"

#include <algorithm>
#include <cmath>

#include "epadm/errors.hpp"

namespace epadm {

Eos::Eos(Kind kind, double m, double K, double Gamma)
    : kind_(kind), m_(m), K_(K), Gamma_(Gamma) {
    if (m < 0.0 || K < 0.0) {
        throw ConfigError("eos: m and K must be non-negative");
    }
    if (kind != Kind::Dust && !(Gamma > 1.0)) {
        throw ConfigError("eos: Gamma must exceed 1");
    }
    if (kind == Kind::Dust && !(m > 0.0)) {
        throw ConfigError("eos: dust needs m > 0");
    }
    if (kind == Kind::Polytrope && !(K > 0.0)) {
        throw ConfigError("eos: polytrope needs K > 0");
    }
    if (kind == Kind::LinearPlusPolytrope && !(m > 0.0)) {
        throw ConfigError("eos: linear_plus_polytrope needs m > 0");
    }
}

Eos Eos::dust(double m) { return Eos(Kind::Dust, m, 0.0, 2.0); }

Eos Eos::polytrope(double K, double Gamma) {
    return Eos(Kind::Polytrope, 0.0, K, Gamma);
}

Eos Eos::linear_plus_polytrope(double m, double K, double Gamma) {
    return Eos(Kind::LinearPlusPolytrope, m, K, Gamma);
}

Eos Eos::from_name(const std::string& kind, double m, double K, double Gamma) {
    if (kind == "dust") return dust(m);
    if (kind == "polytrope") return polytrope(K, Gamma);
    if (kind == "linear_plus_polytrope") {
        return linear_plus_polytrope(m, K, Gamma);
    }
    throw ConfigError("eos: unknown kind '" + kind + "'");
}

void Eos::check_n(double n) const {
    if (!(n > 0.0)) {
        throw InvariantError("eos: number density must be positive, got n=" +
                             std::to_string(n));
    }
}

double Eos::rho(double n) const {
    check_n(n);
    switch (kind_) {
        case Kind::Dust:
            return m_ * n;
        case Kind::Polytrope:
            return K_ * std::pow(n, Gamma_);
        case Kind::LinearPlusPolytrope:
            return m_ * n + K_ * std::pow(n, Gamma_) / (Gamma_ - 1.0);
    }
    return 0.0;
}

double Eos::drho_dn(double n) const {
    check_n(n);
    switch (kind_) {
        case Kind::Dust:
            return m_;
        case Kind::Polytrope:
            return K_ * Gamma_ * std::pow(n, Gamma_ - 1.0);
        case Kind::LinearPlusPolytrope:
            return m_ + K_ * Gamma_ * std::pow(n, Gamma_ - 1.0) / (Gamma_ - 1.0);
    }
    return 0.0;
}

double Eos::d2rho_dn2(double n) const {
    check_n(n);
    switch (kind_) {
        case Kind::Dust:
            return 0.0;
        case Kind::Polytrope:
            return K_ * Gamma_ * (Gamma_ - 1.0) * std::pow(n, Gamma_ - 2.0);
        case Kind::LinearPlusPolytrope:
            return K_ * Gamma_ * std::pow(n, Gamma_ - 2.0);
    }
    return 0.0;
}

double Eos::pressure(double n) const { return n * drho_dn(n) - rho(n); }

double Eos::sound_speed_sq(double n) const {
    const double cs2 = n * d2rho_dn2(n) / drho_dn(n);
    return std::clamp(cs2, 0.0, 1.0);
}

std::string Eos::name() const {
    switch (kind_) {
        case Kind::Dust: return "dust";
        case Kind::Polytrope: return "polytrope";
        case Kind::LinearPlusPolytrope: return "linear_plus_polytrope";
    }
    return "unknown";
}

}  // namespace epadm
