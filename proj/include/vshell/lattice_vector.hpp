#ifndef VSHELL_LATTICE_VECTOR_HPP
#define VSHELL_LATTICE_VECTOR_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vshell {

/// A non-negative integer vector of length 1..16, stored inline.
///
/// Comparison operators give the lexicographic order on coordinates (vectors of
/// different length compare by length first). This is the `<^L` order used on
/// atoms; partial orders live in veronese.hpp.
class LatticeVector {
public:
    static constexpr std::size_t max_dimension = 16;
    using value_type = std::uint32_t;

    LatticeVector() = default;

    explicit LatticeVector(std::size_t n) : size_(static_cast<std::uint8_t>(n)) {
        check_dimension(n);
    }

    LatticeVector(std::initializer_list<value_type> coords) : LatticeVector(coords.size()) {
        std::copy(coords.begin(), coords.end(), coords_.begin());
    }

    explicit LatticeVector(std::span<const value_type> coords) : LatticeVector(coords.size()) {
        std::copy(coords.begin(), coords.end(), coords_.begin());
    }

    /// Builds from signed values; throws if any coordinate is negative or too large.
    static LatticeVector from_signed(std::span<const std::int64_t> coords) {
        LatticeVector v(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (coords[i] < 0 || coords[i] > static_cast<std::int64_t>(UINT32_MAX)) {
                throw std::invalid_argument("lattice vector coordinate out of range: " +
                                            std::to_string(coords[i]));
            }
            v.coords_[i] = static_cast<value_type>(coords[i]);
        }
        return v;
    }

    static LatticeVector zero(std::size_t n) { return LatticeVector(n); }

    static LatticeVector ones(std::size_t n) {
        LatticeVector v(n);
        std::fill_n(v.coords_.begin(), n, 1u);
        return v;
    }

    std::size_t size() const noexcept { return size_; }
    value_type operator[](std::size_t i) const noexcept { return coords_[i]; }
    value_type& operator[](std::size_t i) noexcept { return coords_[i]; }
    std::span<const value_type> coords() const noexcept { return {coords_.data(), size_}; }

    std::uint64_t sum() const noexcept {
        return std::accumulate(coords_.begin(), coords_.begin() + size_, std::uint64_t{0});
    }

    bool is_zero() const noexcept {
        return std::all_of(coords_.begin(), coords_.begin() + size_, [](value_type c) { return c == 0; });
    }

    /// Coordinatewise `<=`.
    bool dominated_by(const LatticeVector& other) const noexcept {
        if (size_ != other.size_) return false;
        for (std::size_t i = 0; i < size_; ++i)
            if (coords_[i] > other.coords_[i]) return false;
        return true;
    }

    /// The suffix x^(l) = (x_l, ..., x_n) is all zero (l is 1-based).
    bool suffix_is_zero(std::size_t l) const noexcept {
        for (std::size_t i = l - 1; i < size_; ++i)
            if (coords_[i] != 0) return false;
        return true;
    }

    /// 1-based index of the first nonzero coordinate, or 0 for the zero vector.
    std::size_t leading_index() const noexcept {
        for (std::size_t i = 0; i < size_; ++i)
            if (coords_[i] != 0) return i + 1;
        return 0;
    }

    LatticeVector& operator+=(const LatticeVector& other) {
        check_same_size(other);
        for (std::size_t i = 0; i < size_; ++i) coords_[i] += other.coords_[i];
        return *this;
    }

    /// Throws std::domain_error if a coordinate would become negative.
    LatticeVector& operator-=(const LatticeVector& other) {
        check_same_size(other);
        for (std::size_t i = 0; i < size_; ++i) {
            if (other.coords_[i] > coords_[i]) throw std::domain_error("negative coordinate after subtraction");
            coords_[i] -= other.coords_[i];
        }
        return *this;
    }

    friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
    friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }

    friend bool operator==(const LatticeVector& a, const LatticeVector& b) noexcept {
        return a.size_ == b.size_ && std::equal(a.coords_.begin(), a.coords_.begin() + a.size_, b.coords_.begin());
    }

    friend std::strong_ordering operator<=>(const LatticeVector& a, const LatticeVector& b) noexcept {
        if (a.size_ != b.size_) return a.size_ <=> b.size_;
        for (std::size_t i = 0; i < a.size_; ++i)
            if (a.coords_[i] != b.coords_[i]) return a.coords_[i] <=> b.coords_[i];
        return std::strong_ordering::equal;
    }

    std::vector<std::int64_t> to_payload() const { return {coords_.begin(), coords_.begin() + size_}; }

    /// Digit string ("1102") when every coordinate is a single digit, comma-separated otherwise.
    std::string to_string() const {
        bool digits = std::all_of(coords_.begin(), coords_.begin() + size_, [](value_type c) { return c <= 9; });
        std::string out;
        for (std::size_t i = 0; i < size_; ++i) {
            if (!digits && i > 0) out += ',';
            out += std::to_string(coords_[i]);
        }
        return out;
    }

    /// Accepts "2,3,3,4" or a digit string "2334".
    static LatticeVector parse(std::string_view text) {
        std::vector<value_type> coords;
        if (text.find(',') == std::string_view::npos) {
            for (char ch : text) {
                if (ch < '0' || ch > '9') throw std::invalid_argument("malformed vector: " + std::string(text));
                coords.push_back(static_cast<value_type>(ch - '0'));
            }
        } else {
            std::size_t pos = 0;
            while (pos <= text.size()) {
                std::size_t next = text.find(',', pos);
                if (next == std::string_view::npos) next = text.size();
                auto token = text.substr(pos, next - pos);
                while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
                while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
                if (token.empty() || token.size() > 10) throw std::invalid_argument("malformed vector: " + std::string(text));
                std::uint64_t value = 0;
                for (char ch : token) {
                    if (ch < '0' || ch > '9') throw std::invalid_argument("malformed vector: " + std::string(text));
                    value = value * 10 + static_cast<std::uint64_t>(ch - '0');
                }
                if (value > UINT32_MAX) throw std::invalid_argument("coordinate too large: " + std::string(token));
                coords.push_back(static_cast<value_type>(value));
                pos = next + 1;
            }
        }
        if (coords.empty() || coords.size() > max_dimension)
            throw std::invalid_argument("vector dimension must be in 1..16: " + std::string(text));
        return LatticeVector(std::span<const value_type>(coords));
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 1469598103934665603ULL ^ size_;
        for (std::size_t i = 0; i < size_; ++i) {
            h ^= coords_[i];
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }

private:
    static void check_dimension(std::size_t n) {
        if (n == 0 || n > max_dimension) throw std::invalid_argument("vector dimension must be in 1..16");
    }
    void check_same_size(const LatticeVector& other) const {
        if (size_ != other.size_) throw std::invalid_argument("vector dimension mismatch");
    }

    std::array<value_type, max_dimension> coords_{};
    std::uint8_t size_ = 0;
};

struct LatticeVectorHash {
    std::size_t operator()(const LatticeVector& v) const noexcept { return v.hash(); }
};

}  // namespace vshell

template <>
struct std::hash<vshell::LatticeVector> : vshell::LatticeVectorHash {};

#endif
