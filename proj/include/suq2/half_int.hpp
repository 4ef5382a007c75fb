#ifndef SUQ2_HALF_INT_HPP
#define SUQ2_HALF_INT_HPP

#include <compare>
#include <ostream>
#include <string>

namespace suq2 {

// Exact half-integer, stored as twice its value.  All spin labels (n, i, j)
// and the shift nu = 1/2 live in (1/2)Z; keeping the doubled integer avoids
// any floating-point label arithmetic.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int t) { return HalfInt(t); }
    static constexpr HalfInt whole(int k) { return HalfInt(2 * k); }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return 0.5 * twice_; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice_ - b.twice_); }
    constexpr HalfInt operator-() const { return HalfInt(-twice_); }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }
    friend std::ostream& operator<<(std::ostream& os, HalfInt h) { return os << h.str(); }

private:
    constexpr explicit HalfInt(int t) : twice_(t) {}
    int twice_ = 0;
};

inline constexpr HalfInt nu_half = HalfInt::from_twice(1); // the paper's nu = 1/2

} // namespace suq2

#endif
