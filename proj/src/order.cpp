#include "sputter/order.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace sputter {

namespace {

void check_sign(int s)
{
    if (s < -1 || s > 1) throw std::invalid_argument("sign entries must be -1, 0 or +1");
}

void require_same_length(std::size_t r, std::size_t a, std::size_t b)
{
    if (r != a || r != b)
        throw std::invalid_argument("order: length mismatch (r=" + std::to_string(r) + ", a=" + std::to_string(a)
                                    + ", b=" + std::to_string(b) + ")");
}

} // namespace

SignVector::SignVector(std::initializer_list<int> entries)
{
    entries_.reserve(entries.size());
    for (int s : entries) {
        check_sign(s);
        entries_.push_back(static_cast<std::int8_t>(s));
    }
}

SignVector::SignVector(std::vector<std::int8_t> entries) : entries_(std::move(entries))
{
    for (int s : entries_) check_sign(s);
}

SignVector SignVector::negated() const
{
    std::vector<std::int8_t> out(entries_.size());
    std::transform(entries_.begin(), entries_.end(), out.begin(), [](std::int8_t s) { return static_cast<std::int8_t>(-s); });
    return SignVector(std::move(out));
}

std::string SignVector::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ',';
        s += entries_[i] > 0 ? '+' : entries_[i] < 0 ? '-' : '0';
    }
    return s + ")";
}

SignVector operator+(const SignVector& lhs, const SignVector& rhs)
{
    if (lhs.size() != rhs.size()) throw std::invalid_argument("sign vector sum: length mismatch");
    std::vector<std::int8_t> out(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const int s = lhs[i] + rhs[i];
        if (s < -1 || s > 1) throw std::invalid_argument("sign vector sum: overlapping nonzero supports");
        out[i] = static_cast<std::int8_t>(s);
    }
    return SignVector(std::move(out));
}

double order_violation(const SignVector& r, std::span<const double> a, std::span<const double> b)
{
    require_same_length(r.size(), a.size(), b.size());
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0) continue;
        worst = std::max(worst, r[i] * (a[i] - b[i]));
    }
    return worst;
}

bool ordered(const SignVector& r, std::span<const double> a, std::span<const double> b)
{
    return ordered_tol(r, a, b, 0.0);
}

bool ordered_tol(const SignVector& r, std::span<const double> a, std::span<const double> b, double tol)
{
    require_same_length(r.size(), a.size(), b.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0) continue;
        // written as a comparison so that NaN never counts as ordered
        if (!(r[i] * (a[i] - b[i]) <= tol)) return false;
    }
    return true;
}

std::vector<double> project_to_cone(const SignVector& r, std::span<const double> base, std::span<const double> candidate,
                                    Side side)
{
    require_same_length(r.size(), base.size(), candidate.size());
    std::vector<double> v(candidate.begin(), candidate.end());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] == 0) {
            v[i] = base[i];
            continue;
        }
        // side a: r_i (v_i - base_i) <= 0; side b: r_i (base_i - v_i) <= 0
        const int dir = side == Side::a ? r[i] : -r[i];
        if (dir > 0)
            v[i] = std::min(v[i], base[i]);
        else
            v[i] = std::max(v[i], base[i]);
    }
    return v;
}

namespace orders {

SignVector r_y() { return {-1, -1}; }
SignVector r_x() { return {1, 1, 1}; }
SignVector r_u() { return {1}; }
SignVector r_pi_tilde() { return {0, 1, 1}; }
SignVector r_pi() { return {-1, 1, 1}; }
SignVector r_phi() { return {-1, 1, -1}; }

SignVector r_p_g() { return {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 1, -1, 1}; }

//                          a11 a112 a113 a12 a123 a212 a22 a313 a323 a33c a33m b  c11 c12 c20 c21
SignVector r_p_f() { return {-1, -1,  -1,  1,  -1,   1,  -1,  1,   1,  -1,  -1,  1, 0,  0,  0,  0}; }

SignVector r_p() { return r_p_f() + r_p_g(); }

} // namespace orders

} // namespace sputter
