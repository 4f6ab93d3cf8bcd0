#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace telesim {

// Single-qubit Pauli mod phase. Bit 0 is the Z exponent s1, bit 1 the X exponent s2,
// so code (s1, s2) stands for X^{s2} Z^{s1}.
enum class Pauli : uint8_t { I = 0, Z = 1, X = 2, Y = 3 };

inline Pauli pauli_from_bits(bool s1, bool s2) { return static_cast<Pauli>(int(s1) | (int(s2) << 1)); }
inline bool pauli_s1(Pauli p) { return static_cast<uint8_t>(p) & 1; }
inline bool pauli_s2(Pauli p) { return (static_cast<uint8_t>(p) >> 1) & 1; }
inline bool pauli_has_x(Pauli p) { return pauli_s2(p); }
inline bool pauli_has_z(Pauli p) { return pauli_s1(p); }
inline Pauli operator*(Pauli a, Pauli b) {
    return static_cast<Pauli>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
inline bool pauli_commute(Pauli a, Pauli b) {
    return ((pauli_s2(a) & pauli_s1(b)) ^ (pauli_s1(a) & pauli_s2(b))) == 0;
}
// k such that P_a P_b = i^k P_{a*b} for the Hermitian Pauli matrices.
int pauli_product_phase(Pauli a, Pauli b);
char pauli_char(Pauli p);
Pauli pauli_from_char(char c);  // throws std::invalid_argument

struct SignedPauli {
    Pauli p = Pauli::I;
    bool neg = false;
    bool operator==(const SignedPauli &) const = default;
};

struct GaussInt {
    int64_t re = 0;
    int64_t im = 0;
    GaussInt operator+(GaussInt o) const { return {re + o.re, im + o.im}; }
    GaussInt operator-(GaussInt o) const { return {re - o.re, im - o.im}; }
    GaussInt operator-() const { return {-re, -im}; }
    GaussInt operator*(GaussInt o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    GaussInt conj() const { return {re, -im}; }
    int64_t norm() const { return re * re + im * im; }
    bool zero() const { return re == 0 && im == 0; }
    bool operator==(const GaussInt &) const = default;
};

// Exact value num * 2^{-log2den} with num odd or log2den == 0.
struct Dyadic {
    int64_t num = 0;
    int log2den = 0;
    static Dyadic make(int64_t num, int log2den);
    double value() const;
    bool operator==(const Dyadic &) const = default;
    std::string str() const;
};

// 2^{-k/2} * m with Gaussian-integer entries.
struct ExactUnitary2 {
    std::array<std::array<GaussInt, 2>, 2> m{};
    int k = 0;

    static ExactUnitary2 identity();
    static ExactUnitary2 hadamard();
    static ExactUnitary2 phase_s();
    static ExactUnitary2 pauli(Pauli p);
    // (I - iP)/sqrt(2)
    static ExactUnitary2 rotation(Pauli p);

    ExactUnitary2 operator*(const ExactUnitary2 &o) const;
    ExactUnitary2 adjoint() const;
    ExactUnitary2 transpose() const;
    ExactUnitary2 negated() const;
    // Divides out (1+i) while every entry allows it. Changes the operator by a phase only.
    ExactUnitary2 reduced() const;
    GaussInt trace_raw() const { return m[0][0] + m[1][1]; }
    Dyadic abs_trace_sq() const;
    bool trace_is_zero() const { return trace_raw().zero(); }
    // Exact operator equality (no phase freedom).
    bool operator==(const ExactUnitary2 &o) const;
    // Equal up to a global phase.
    bool phase_equal(const ExactUnitary2 &o) const;
    // C P C^dagger expressed as a signed Pauli. Throws if this is not a Clifford.
    SignedPauli conjugate(Pauli p) const;
};

// Clifford mod phase, stored as its table index in [0, 24).
using Clifford = uint8_t;

enum class Gen : uint8_t { H = 0, S = 1, X = 2, Z = 3 };

struct CliffordForm {
    SignedPauli x_img;
    SignedPauli z_img;
    auto key() const {
        return std::array<int, 4>{int(x_img.p), int(x_img.neg), int(z_img.p), int(z_img.neg)};
    }
    bool operator==(const CliffordForm &) const = default;
};

struct GroupTable {
    static constexpr int kSize = 24;
    std::array<std::array<Clifford, kSize>, kSize> mult{};  // mult[a][b] = a*b (b acts first)
    std::array<Clifford, kSize> inv{};
    std::array<Clifford, kSize> transp{};  // class of the matrix transpose
    std::array<std::array<SignedPauli, 4>, kSize> conj{};
    std::array<bool, kSize> traceless{};
    std::array<int, kSize> abs_trace_sq{};
    std::array<CliffordForm, kSize> form{};
    std::array<ExactUnitary2, kSize> rep{};
    std::array<std::vector<Gen>, kSize> word{};  // generators in time order
    std::array<int, kSize> bfs_level{};
    std::array<Clifford, 4> pauli_class{};
    Clifford identity = 0;
    Clifford h = 0;
    Clifford s = 0;
    Clifford sdg = 0;

    Clifford index_of(const CliffordForm &f) const;
    Clifford class_of(const ExactUnitary2 &u) const;

   private:
    std::array<int16_t, 64> lookup_{};
    friend GroupTable build_group_table();
};

GroupTable build_group_table();
// Process-wide immutable table, built on first use.
const GroupTable &group();

inline Clifford compose(Clifford a, Clifford b) { return group().mult[a][b]; }
inline Clifford inverse(Clifford c) { return group().inv[c]; }
inline Clifford transpose(Clifford c) { return group().transp[c]; }
inline SignedPauli conjugate_pauli(Clifford c, Pauli p) { return group().conj[c][static_cast<int>(p)]; }
inline bool trace_is_zero(Clifford c) { return group().traceless[c]; }
inline int abs_trace_sq(Clifford c) { return group().abs_trace_sq[c]; }
inline Clifford pauli_clifford(Pauli p) { return group().pauli_class[static_cast<int>(p)]; }
Clifford rotation_clifford(Pauli p);
// The Pauli this class equals, if any.
bool clifford_is_pauli(Clifford c, Pauli *out = nullptr);

// Accepts I X Y Z H S SDG, a 5-bit string (iota image) or "c<index>".
Clifford parse_clifford(const std::string &tok);
std::string clifford_bits(Clifford c);  // 5-bit iota image, most significant bit first
std::string clifford_name(Clifford c);   // short name where one exists, else the bit string

struct EncodingMap {
    std::array<Clifford, 8> completion{};
    static constexpr unsigned kBits = 5;
    static unsigned iota(Clifford c) { return c; }
    static bool in_image(unsigned x) { return x < GroupTable::kSize; }
    Clifford apply(unsigned x) const { return in_image(x) ? Clifford(x) : completion[x - GroupTable::kSize]; }
};

inline Clifford enc_apply(const EncodingMap &e, unsigned x) { return e.apply(x); }
EncodingMap enc_random(uint64_t seed);

}  // namespace telesim
