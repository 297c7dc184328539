#pragma once

#include <string>

// Barotropic equation-of-state family. Energy density rho(n) with analytic
// first and second derivatives; pressure p = n rho'(n) - rho(n).
//
//   dust:                  rho = m n
//   polytrope:             rho = K n^Gamma
//   linear_plus_polytrope: rho = m n + K n^Gamma / (Gamma - 1)

namespace epadm {

class Eos {
public:
    enum class Kind { Dust, Polytrope, LinearPlusPolytrope };

    static Eos dust(double m);
    static Eos polytrope(double K, double Gamma);
    static Eos linear_plus_polytrope(double m, double K, double Gamma);
    static Eos from_name(const std::string& kind, double m, double K,
                         double Gamma);

    double rho(double n) const;
    double drho_dn(double n) const;
    double d2rho_dn2(double n) const;
    double pressure(double n) const;

    // c_s^2 = n rho'' / rho', clipped to [0, 1].
    double sound_speed_sq(double n) const;

    Kind kind() const { return kind_; }
    std::string name() const;

private:
    Eos(Kind kind, double m, double K, double Gamma);
    void check_n(double n) const;

    Kind kind_;
    double m_ = 0.0;
    double K_ = 0.0;
    double Gamma_ = 2.0;
};

}  // namespace epadm
