#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdof/cuts.hpp"
#include "netdof/network.hpp"

namespace netdof {

// Largest allowed field size; residues are 64-bit with 128-bit products.
inline constexpr std::uint64_t kMaxPrime = (std::uint64_t{1} << 31) - 1;

// Arithmetic in GF(p) for prime p.
struct PrimeField {
    std::uint64_t p = 2;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    std::uint64_t inv(std::uint64_t a) const;  // a != 0
};

bool is_prime(std::uint64_t n);
std::uint64_t next_prime_above(std::uint64_t n);

// Smallest prime strictly greater than 2 * edge_count * num_cuts, so a
// uniform random assignment fails a polynomial-identity check with
// probability at most 1/2 per attempt.
std::uint64_t choose_prime(std::uint64_t edge_count, std::uint64_t num_cuts);

struct FpMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint64_t> a;  // row-major residues

    FpMatrix() = default;
    FpMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    std::uint64_t& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    std::uint64_t at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static FpMatrix identity(int n);

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
};

// Exact rank by Gaussian elimination; no tolerance.
int fp_rank(FpMatrix m, const PrimeField& f);

// Determinant by elimination with pivot sign tracking. Square only.
std::uint64_t fp_det(FpMatrix m, const PrimeField& f);

// Inverse of a nonsingular square matrix (Gauss-Jordan).
FpMatrix fp_inverse(const FpMatrix& m, const PrimeField& f);

// Lexicographically-first maximal independent row set, then the
// lexicographically-first pivot column set within those rows.
struct FpRankProfile {
    int rank = 0;
    std::vector<int> rows;
    std::vector<int> cols;
    FpMatrix basis;  // rank x rank, invertible
};
FpRankProfile fp_rank_profile(const FpMatrix& m, const PrimeField& f);

// Finite-field lift of a Gaussian network: same topology, vector length q,
// and a nonzero residue on every edge.
struct DeterministicNetwork {
    Network graph;
    std::uint64_t p = 0;
    int q = 0;
    std::vector<std::uint64_t> xi;  // per edge index
};

struct CutCertRow {
    std::uint64_t cut_bitmask = 0;
    int m_omega = 0;
    int rank_h = 0;  // numerical rank of the complex cut matrix
    int rank_g = 0;  // exact rank of the field cut matrix
};

struct LiftCertificate {
    std::vector<CutCertRow> per_cut;
    int attempts = 0;
    std::vector<std::uint64_t> primes_tried;

    bool valid() const;
};

struct LiftResult {
    DeterministicNetwork net;
    LiftCertificate cert;
};

// Draws nonzero residues until every cut's field rank dominates its Gaussian
// rank; escalates to a larger prime (doubling the size bound) after
// max_attempts failures. Deterministic given (seed, net). Throws CheckError
// once escalation is exhausted. A nonzero prime_override pins the field size
// and disables escalation.
LiftResult lift_network(const Network& net, std::uint64_t seed, int max_attempts = 20,
                        double rel_tol = kDefaultRankTol, std::uint64_t prime_override = 0);

// Field-variant cut matrix, same shape and ordering as cut_matrix.
FpMatrix fp_cut_matrix(const DeterministicNetwork& dn, const Cut& cut);

int deterministic_min_cut_rank(const DeterministicNetwork& dn, int s, int t);
int deterministic_multicast_min_cut_rank(const DeterministicNetwork& dn, int s,
                                         const std::vector<int>& sinks);

std::string serialize_deterministic(const DeterministicNetwork& dn);
DeterministicNetwork parse_deterministic(const std::string& text);
DeterministicNetwork read_deterministic_file(const std::string& path);

std::string certificate_csv(const LiftCertificate& cert, const DeterministicNetwork& dn,
                            std::uint64_t seed, double rel_tol);

} // namespace netdof
