#pragma once

#include "sputter/parameters.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sputter {

enum class Side { a, b };

// Sign vector r over {-1, 0, +1} defining the order a <=_r b  <=>  r_i (a_i - b_i) <= 0 for all i.
class SignVector {
public:
    SignVector() = default;
    SignVector(std::initializer_list<int> entries);
    explicit SignVector(std::vector<std::int8_t> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    int operator[](std::size_t i) const noexcept { return entries_[i]; }

    SignVector negated() const;
    std::string to_string() const; // e.g. "(-,+,0)"

    friend SignVector operator+(const SignVector& lhs, const SignVector& rhs);
    bool operator==(const SignVector&) const = default;

private:
    std::vector<std::int8_t> entries_;
};

// Exact order predicate.
bool ordered(const SignVector& r, std::span<const double> a, std::span<const double> b);

// Relaxed predicate, r_i (a_i - b_i) <= tol, for numerically integrated quantities.
bool ordered_tol(const SignVector& r, std::span<const double> a, std::span<const double> b, double tol = 1e-9);

// Largest violation max_i r_i (a_i - b_i); <= 0 means ordered.
double order_violation(const SignVector& r, std::span<const double> a, std::span<const double> b);

// Entry-wise nearest vector v with v <=_r base (side a) or base <=_r v (side b).
// Zero-sign entries are forced to base_i.
std::vector<double> project_to_cone(const SignVector& r, std::span<const double> base, std::span<const double> candidate,
                                    Side side);

namespace orders {

SignVector r_y();           // (-,-)
SignVector r_x();           // (+,+,+)
SignVector r_u();           // (+)
SignVector r_pi_tilde();    // (0,+,+)
SignVector r_pi();          // (-,+,+)
SignVector r_phi();         // (-,+,-)
SignVector r_p_g();         // zeros on the system-function parameters, (-,+,-,+) on c11..c21
SignVector r_p_f();
SignVector r_p();           // r_p_f + r_p_g

} // namespace orders

} // namespace sputter
