#include "netdof/fp.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "netdof/errors.hpp"
#include "netdof/rng.hpp"

namespace netdof {

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a % p == 0) throw UsageError("inverse of zero");
    return pow(a, p - 2);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t next_prime_above(std::uint64_t n) {
    std::uint64_t k = n + 1;
    while (!is_prime(k)) ++k;
    return k;
}

std::uint64_t choose_prime(std::uint64_t edge_count, std::uint64_t num_cuts) {
    if (edge_count < 1 || num_cuts < 1) throw UsageError("choose_prime needs positive arguments");
    std::uint64_t bound = 2 * edge_count * num_cuts;
    if (bound > kMaxPrime) throw CeilingError("field size bound exceeds 2^31 - 1");
    return next_prime_above(bound);
}

FpMatrix FpMatrix::identity(int n) {
    FpMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

int fp_rank(FpMatrix m, const PrimeField& f) {
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r) {
            if (m.at(r, col) % f.p != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = col; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        std::uint64_t piv_inv = f.inv(m.at(rank, col));
        for (int r = rank + 1; r < m.rows; ++r) {
            std::uint64_t factor = f.mul(m.at(r, col) % f.p, piv_inv);
            if (factor == 0) continue;
            for (int c = col; c < m.cols; ++c)
                m.at(r, c) = f.sub(m.at(r, c) % f.p, f.mul(factor, m.at(rank, c) % f.p));
        }
        ++rank;
    }
    return rank;
}

std::uint64_t fp_det(FpMatrix m, const PrimeField& f) {
    if (m.rows != m.cols) throw UsageError("determinant of a non-square matrix");
    int n = m.rows;
    bool negate = false;
    std::uint64_t det = 1 % f.p;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (m.at(r, col) % f.p != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return 0;
        if (pivot != col) {
            negate = !negate;
            for (int c = col; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
        }
        std::uint64_t piv = m.at(col, col) % f.p;
        det = f.mul(det, piv);
        std::uint64_t piv_inv = f.inv(piv);
        for (int r = col + 1; r < n; ++r) {
            std::uint64_t factor = f.mul(m.at(r, col) % f.p, piv_inv);
            if (factor == 0) continue;
            for (int c = col; c < n; ++c)
                m.at(r, c) = f.sub(m.at(r, c) % f.p, f.mul(factor, m.at(col, c) % f.p));
        }
    }
    return negate ? f.neg(det) : det;
}

FpMatrix fp_inverse(const FpMatrix& m, const PrimeField& f) {
    if (m.rows != m.cols) throw UsageError("inverse of a non-square matrix");
    int n = m.rows;
    FpMatrix work = m;
    FpMatrix inv = FpMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (work.at(r, col) % f.p != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw UsageError("matrix is singular");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(work.at(pivot, c), work.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        std::uint64_t piv_inv = f.inv(work.at(col, col) % f.p);
        for (int c = 0; c < n; ++c) {
            work.at(col, c) = f.mul(work.at(col, c) % f.p, piv_inv);
            inv.at(col, c) = f.mul(inv.at(col, c) % f.p, piv_inv);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            std::uint64_t factor = work.at(r, col) % f.p;
            if (factor == 0) continue;
            for (int c = 0; c < n; ++c) {
                work.at(r, c) = f.sub(work.at(r, c), f.mul(factor, work.at(col, c)));
                inv.at(r, c) = f.sub(inv.at(r, c), f.mul(factor, inv.at(col, c)));
            }
        }
    }
    return inv;
}

FpRankProfile fp_rank_profile(const FpMatrix& m, const PrimeField& f) {
    FpRankProfile prof;

    // Greedy over rows in order: keep a row iff it enlarges the span.
    FpMatrix basis_rows(0, m.cols);
    std::vector<std::vector<std::uint64_t>> echelon;  // reduced rows
    std::vector<int> lead_cols;
    for (int r = 0; r < m.rows; ++r) {
        std::vector<std::uint64_t> row(m.cols);
        for (int c = 0; c < m.cols; ++c) row[c] = m.at(r, c) % f.p;
        for (std::size_t k = 0; k < echelon.size(); ++k) {
            std::uint64_t factor = row[lead_cols[k]];
            if (factor == 0) continue;
            for (int c = 0; c < m.cols; ++c) row[c] = f.sub(row[c], f.mul(factor, echelon[k][c]));
        }
        int lead = -1;
        for (int c = 0; c < m.cols; ++c) {
            if (row[c] != 0) {
                lead = c;
                break;
            }
        }
        if (lead < 0) continue;
        std::uint64_t inv_lead = f.inv(row[lead]);
        for (int c = 0; c < m.cols; ++c) row[c] = f.mul(row[c], inv_lead);
        echelon.push_back(std::move(row));
        lead_cols.push_back(lead);
        prof.rows.push_back(r);
    }
    prof.rank = static_cast<int>(prof.rows.size());

    // Pivot columns of the selected row set: row echelon over columns in
    // order gives the lexicographically-first independent column set.
    FpMatrix sub(prof.rank, m.cols);
    for (int i = 0; i < prof.rank; ++i)
        for (int c = 0; c < m.cols; ++c) sub.at(i, c) = m.at(prof.rows[i], c) % f.p;
    int rank = 0;
    for (int col = 0; col < m.cols && rank < prof.rank; ++col) {
        int pivot = -1;
        for (int r = rank; r < prof.rank; ++r) {
            if (sub.at(r, col) != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < m.cols; ++c) std::swap(sub.at(pivot, c), sub.at(rank, c));
        std::uint64_t piv_inv = f.inv(sub.at(rank, col));
        for (int r = rank + 1; r < prof.rank; ++r) {
            std::uint64_t factor = f.mul(sub.at(r, col), piv_inv);
            if (factor == 0) continue;
            for (int c = 0; c < m.cols; ++c)
                sub.at(r, c) = f.sub(sub.at(r, c), f.mul(factor, sub.at(rank, c)));
        }
        prof.cols.push_back(col);
        ++rank;
    }

    prof.basis = FpMatrix(prof.rank, prof.rank);
    for (int i = 0; i < prof.rank; ++i)
        for (int j = 0; j < prof.rank; ++j)
            prof.basis.at(i, j) = m.at(prof.rows[i], prof.cols[j]) % f.p;
    return prof;
}

bool LiftCertificate::valid() const {
    return std::all_of(per_cut.begin(), per_cut.end(),
                       [](const CutCertRow& r) { return r.rank_g >= r.rank_h; });
}

FpMatrix fp_cut_matrix(const DeterministicNetwork& dn, const Cut& cut) {
    std::map<AntennaRef, int> tx_index, rx_index;
    for (int e : cut.crossing) {
        tx_index.emplace(dn.graph.edges[e].from, 0);
        rx_index.emplace(dn.graph.edges[e].to, 0);
    }
    int c = 0;
    for (auto& [ant, idx] : tx_index) idx = c++;
    int r = 0;
    for (auto& [ant, idx] : rx_index) idx = r++;
    FpMatrix m(r, c);
    for (int e : cut.crossing)
        m.at(rx_index[dn.graph.edges[e].to], tx_index[dn.graph.edges[e].from]) = dn.xi[e];
    return m;
}

namespace {

// Distinct cuts across all declared (source, sink) flows, first-seen order.
std::vector<Cut> certification_cuts(const Network& net, int s, const std::vector<int>& sinks) {
    std::vector<Cut> cuts;
    std::unordered_set<std::uint64_t> seen;
    for (int t : sinks) {
        for_each_cut(net, s, t, [&](const Cut& cut) {
            if (seen.insert(cut.bitmask).second) cuts.push_back(cut);
        });
    }
    return cuts;
}

} // namespace

LiftResult lift_network(const Network& net, std::uint64_t seed, int max_attempts, double rel_tol,
                        std::uint64_t prime_override) {
    if (net.sources.size() != 1) throw UsageError("lift requires a single-source network");
    if (net.sinks.empty()) throw UsageError("lift requires at least one sink");
    if (!net.all_coefficients_present())
        throw AbsentCoefficientError("lift requires all coefficients present");
    if (max_attempts < 1) throw UsageError("max_attempts must be >= 1");
    if (prime_override != 0 && (!is_prime(prime_override) || prime_override > kMaxPrime))
        throw UsageError("prime override must be a prime <= 2^31 - 1");

    int s = net.sources.front();
    std::vector<Cut> cuts = certification_cuts(net, s, net.sinks);
    std::uint64_t n_edges = net.edges.size();

    // Gaussian side of the certificate, fixed across attempts.
    std::vector<int> rank_h(cuts.size());
    for (std::size_t i = 0; i < cuts.size(); ++i)
        rank_h[i] = numerical_rank(cut_matrix(net, cuts[i]).m, rel_tol);

    LiftResult result;
    result.net.graph = net;
    result.net.q = net.max_antennas();

    std::mt19937_64 gen(derive_seed(seed, kStreamLift));
    constexpr int kMaxEscalations = 12;
    std::uint64_t base_bound =
        n_edges == 0 ? 2 : 2 * n_edges * static_cast<std::uint64_t>(cuts.size());

    for (int round = 0; round <= kMaxEscalations; ++round) {
        std::uint64_t p;
        if (prime_override != 0) {
            p = prime_override;
        } else {
            std::uint64_t bound = base_bound << round;
            if (bound > kMaxPrime) throw CeilingError("field size bound exceeds 2^31 - 1");
            p = next_prime_above(bound);
        }
        result.cert.primes_tried.push_back(p);
        PrimeField f{p};
        std::uniform_int_distribution<std::uint64_t> nonzero(1, p - 1);

        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            ++result.cert.attempts;
            result.net.p = p;
            result.net.xi.assign(n_edges, 0);
            for (auto& x : result.net.xi) x = nonzero(gen);

            std::vector<CutCertRow> table(cuts.size());
            bool ok = true;
            for (std::size_t i = 0; i < cuts.size(); ++i) {
                int rg = fp_rank(fp_cut_matrix(result.net, cuts[i]), f);
                table[i] = {cuts[i].bitmask, cut_value(cuts[i]), rank_h[i], rg};
                if (rg < rank_h[i]) {
                    ok = false;
                    break;  // resample; partial tables are not certificates
                }
            }
            if (ok) {
                result.cert.per_cut = std::move(table);
                return result;
            }
        }
        if (prime_override != 0) break;
    }
    throw CheckError("lift attempts exhausted; rank domination never held for all cuts");
}

int deterministic_min_cut_rank(const DeterministicNetwork& dn, int s, int t) {
    PrimeField f{dn.p};
    int best = std::numeric_limits<int>::max();
    for_each_cut(dn.graph, s, t, [&](const Cut& cut) {
        best = std::min(best, fp_rank(fp_cut_matrix(dn, cut), f));
    });
    return best;
}

int deterministic_multicast_min_cut_rank(const DeterministicNetwork& dn, int s,
                                         const std::vector<int>& sinks) {
    if (sinks.empty()) throw UsageError("multicast needs at least one sink");
    int best = std::numeric_limits<int>::max();
    for (int t : sinks) best = std::min(best, deterministic_min_cut_rank(dn, s, t));
    return best;
}

std::string serialize_deterministic(const DeterministicNetwork& dn) {
    auto doc = nlohmann::ordered_json::parse(serialize_network(dn.graph));
    doc["p"] = dn.p;
    doc["q"] = dn.q;
    for (std::size_t e = 0; e < dn.xi.size(); ++e) doc["edges"][e]["xi"] = dn.xi[e];
    return doc.dump(1) + "\n";
}

DeterministicNetwork parse_deterministic(const std::string& text) {
    DeterministicNetwork dn;
    dn.graph = parse_network(text);
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.contains("p") || !doc["p"].is_number_unsigned())
        throw SyntaxError("lifted network needs a field size 'p'");
    dn.p = doc["p"].get<std::uint64_t>();
    if (!is_prime(dn.p) || dn.p > kMaxPrime) throw SyntaxError("'p' must be a prime <= 2^31 - 1");
    if (!doc.contains("q") || !doc["q"].is_number_integer())
        throw SyntaxError("lifted network needs a vector length 'q'");
    dn.q = doc["q"].get<int>();
    dn.xi.resize(dn.graph.edges.size());
    const auto& edges = doc["edges"];
    for (std::size_t e = 0; e < dn.xi.size(); ++e) {
        if (!edges[e].contains("xi") || !edges[e]["xi"].is_number_unsigned())
            throw SyntaxError("every edge of a lifted network needs an integer 'xi'");
        dn.xi[e] = edges[e]["xi"].get<std::uint64_t>();
        if (dn.xi[e] == 0 || dn.xi[e] >= dn.p)
            throw SyntaxError("edge 'xi' must be a nonzero residue mod p");
    }
    return dn;
}

DeterministicNetwork read_deterministic_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_deterministic(buf.str());
}

std::string certificate_csv(const LiftCertificate& cert, const DeterministicNetwork& dn,
                            std::uint64_t seed, double rel_tol) {
    std::ostringstream out;
    char header[160];
    std::snprintf(header, sizeof(header), "# p=%llu q=%d seed=%llu tol=%g attempts=%d primes_tried=",
                  static_cast<unsigned long long>(dn.p), dn.q,
                  static_cast<unsigned long long>(seed), rel_tol, cert.attempts);
    out << header;
    for (std::size_t i = 0; i < cert.primes_tried.size(); ++i)
        out << (i ? ";" : "") << cert.primes_tried[i];
    out << "\ncut_bitmask,m_omega,rank_H,rank_G\n";
    for (const auto& row : cert.per_cut)
        out << row.cut_bitmask << "," << row.m_omega << "," << row.rank_h << "," << row.rank_g
            << "\n";
    return out.str();
}

} // namespace netdof
