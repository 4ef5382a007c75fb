#ifndef SUQ2_BASIS_HPP
#define SUQ2_BASIS_HPP

#include <cstdint>
#include <vector>

#include "suq2/errors.hpp"
#include "suq2/half_int.hpp"

namespace suq2 {

// Index (n,i,j) of the GNS basis vector e^(n)_{ij}, stored doubled so that
// the lattice conditions are exact integer arithmetic:
//   n2 >= 0, |i2| <= n2, |j2| <= n2, and n2 == i2 == j2 (mod 2).
struct BasisLabel {
    int n2 = 0;
    int i2 = 0;
    int j2 = 0;

    constexpr bool is_valid() const {
        return n2 >= 0 && i2 >= -n2 && i2 <= n2 && j2 >= -n2 && j2 <= n2 &&
               (n2 - i2) % 2 == 0 && (n2 - j2) % 2 == 0;
    }
    constexpr BasisLabel shifted(int dn2, int di2, int dj2) const {
        return BasisLabel{n2 + dn2, i2 + di2, j2 + dj2};
    }
    HalfInt n() const { return HalfInt::from_twice(n2); }
    HalfInt i() const { return HalfInt::from_twice(i2); }
    HalfInt j() const { return HalfInt::from_twice(j2); }

    friend constexpr bool operator==(BasisLabel, BasisLabel) = default;
    friend constexpr auto operator<=>(BasisLabel, BasisLabel) = default;
};

// All labels with n2 <= n2_max, ordered lexicographically by (n2, i2, j2).
// The ordering is closed-form: shell n2 holds (n2+1)^2 labels, and within a
// shell the position is (i-slot)*(n2+1) + (j-slot).  index_of/label_at are
// therefore O(1)/O(log n2_max) with no hashing.
class TruncatedSpace {
public:
    explicit TruncatedSpace(int n2_max) : n2_max_(n2_max) {
        if (n2_max < 0) throw config_error("TruncatedSpace: n2_max must be >= 0");
        offsets_.resize(static_cast<std::size_t>(n2_max) + 2);
        offsets_[0] = 0;
        for (int k = 0; k <= n2_max; ++k) {
            const std::int64_t sz = static_cast<std::int64_t>(k + 1) * (k + 1);
            offsets_[static_cast<std::size_t>(k) + 1] = offsets_[static_cast<std::size_t>(k)] + sz;
        }
    }

    int n2_max() const { return n2_max_; }
    std::int64_t dim() const { return offsets_.back(); }

    bool contains(BasisLabel x) const { return x.is_valid() && x.n2 <= n2_max_; }

    std::int64_t shell_begin(int n2) const { return offsets_[static_cast<std::size_t>(n2)]; }
    std::int64_t shell_end(int n2) const { return offsets_[static_cast<std::size_t>(n2) + 1]; }

    std::int64_t index_of(BasisLabel x) const {
        if (!contains(x)) throw config_error("index_of: label outside space");
        const std::int64_t islot = (x.i2 + x.n2) / 2;
        const std::int64_t jslot = (x.j2 + x.n2) / 2;
        return shell_begin(x.n2) + islot * (x.n2 + 1) + jslot;
    }

    BasisLabel label_at(std::int64_t idx) const {
        if (idx < 0 || idx >= dim()) throw config_error("label_at: ordinal out of range");
        int lo = 0, hi = n2_max_;
        while (lo < hi) { // first shell with shell_end > idx
            const int mid = (lo + hi) / 2;
            if (shell_end(mid) > idx) hi = mid; else lo = mid + 1;
        }
        const int n2 = lo;
        const std::int64_t off = idx - shell_begin(n2);
        const int islot = static_cast<int>(off / (n2 + 1));
        const int jslot = static_cast<int>(off % (n2 + 1));
        return BasisLabel{n2, 2 * islot - n2, 2 * jslot - n2};
    }

    std::vector<BasisLabel> enumerate() const {
        std::vector<BasisLabel> out;
        out.reserve(static_cast<std::size_t>(dim()));
        for (int n2 = 0; n2 <= n2_max_; ++n2)
            for (int i2 = -n2; i2 <= n2; i2 += 2)
                for (int j2 = -n2; j2 <= n2; j2 += 2)
                    out.push_back(BasisLabel{n2, i2, j2});
        return out;
    }

    // Labels whose image under any operator of the given band stays inside
    // the truncation.  Because of the shell-major ordering this is simply
    // the ordinal prefix [0, count).
    struct Interior {
        std::int64_t count = 0;
        int n2_limit = -1;    // largest shell included, -1 if empty
        bool clipped = false; // band exceeded n2_max
    };
    Interior interior(int band) const {
        if (band < 0) throw config_error("interior: band must be >= 0");
        if (band > n2_max_) return Interior{0, -1, true};
        const int lim = n2_max_ - band;
        return Interior{shell_end(lim), lim, false};
    }

    friend bool operator==(const TruncatedSpace& a, const TruncatedSpace& b) {
        return a.n2_max_ == b.n2_max_;
    }

private:
    int n2_max_;
    std::vector<std::int64_t> offsets_;
};

} // namespace suq2

#endif
