#pragma once

#include <array>
#include <cmath>

namespace plap {

class FeFunction;

/// Exponent p and shift kappa of the flux S(xi) = (kappa + |xi|)^(p-2) xi.
struct FluxParams {
    double p = 2.0;
    double kappa = 0.0;

    /// Throws std::invalid_argument unless p > 1 and kappa >= 0.
    void validate() const;
};

/// A spatial gradient in two dimensions.
struct Grad2 {
    double x = 0.0;
    double y = 0.0;

    friend Grad2 operator+(Grad2 a, Grad2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Grad2 operator-(Grad2 a, Grad2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Grad2 operator*(double s, Grad2 a) { return {s * a.x, s * a.y}; }
    Grad2& operator+=(Grad2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    friend bool operator==(Grad2, Grad2) = default;
};

inline double dot(Grad2 a, Grad2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Grad2 a) { return std::hypot(a.x, a.y); }
inline double norm_sq(Grad2 a) { return a.x * a.x + a.y * a.y; }

/// Symmetric 2x2 matrix, row-major.
using Mat2 = std::array<std::array<double, 2>, 2>;

inline Grad2 apply(const Mat2& a, Grad2 v) {
    return {a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y};
}

Grad2 eval_S(const FluxParams& params, Grad2 xi);
Grad2 eval_V(const FluxParams& params, Grad2 xi);

/// phi(t) = int_0^t (kappa + s)^(p-2) s ds, evaluated in closed form.
double eval_phi(const FluxParams& params, double t);

/// Jacobian of S. Throws SingularPointError at xi = 0 when kappa = 0 and p < 2.
Mat2 eval_DS(const FluxParams& params, Grad2 xi);

/// Dirichlet-type energy sum_T |T| phi(|grad v|_T|); exact for P1 functions.
double energy(const FluxParams& params, const FeFunction& v);

}  // namespace plap
