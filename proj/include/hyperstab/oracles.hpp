#pragma once

// Exhaustive checks of the small finite facts behind the rank-two argument:
// the permutation-diagonal matrix lemmas, the exactly-one labelling system
// on Fstar and the rank-three evaluation table. Nothing here calls the
// homomorphism solver, so agreement with it is an independent cross-check.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "certificate.hpp"
#include "error.hpp"

namespace hyperstab::oracles {

inline constexpr std::size_t max_counterexamples = 100;

class BinaryMatrix {
public:
    BinaryMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {
        if (rows > 8 || cols > 8)
            throw Error(ErrorKind::WrongShape, "binary matrices are limited to 8x8");
    }

    /// Row-major bits: bit (r * cols + c) of `code` is entry (r, c).
    static BinaryMatrix from_code(std::size_t rows, std::size_t cols, std::uint64_t code) {
        BinaryMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows * cols; ++i)
            m.bits_[i] = static_cast<std::uint8_t>((code >> i) & 1U);
        return m;
    }

    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows) {
        BinaryMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_)
                throw Error(ErrorKind::WrongShape, "ragged matrix rows");
            for (std::size_t c = 0; c < m.cols_; ++c)
                m.set(r, c, rows[r][c] != 0);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    int operator()(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, bool v) { bits_[r * cols_ + c] = v; }

    BinaryMatrix select_rows(const std::vector<std::size_t>& which) const {
        BinaryMatrix m(which.size(), cols_);
        for (std::size_t i = 0; i < which.size(); ++i)
            for (std::size_t c = 0; c < cols_; ++c)
                m.set(i, c, (*this)(which[i], c));
        return m;
    }

    int total() const {
        int s = 0;
        for (auto b : bits_)
            s += b;
        return s;
    }

    std::string str() const {
        std::string s;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r)
                s += '/';
            for (std::size_t c = 0; c < cols_; ++c)
                s += static_cast<char>('0' + (*this)(r, c));
        }
        return s;
    }

private:
    std::size_t rows_, cols_;
    std::vector<std::uint8_t> bits_;
};

/// The six permutations of {0,1,2}.
inline constexpr std::array<std::array<int, 3>, 6> s3 = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

enum class DiagCondition {
    exactly_one,  // every permutation diagonal sums to 1
    at_most_one,  // weakened form, used to show the check can fail
};

inline bool check_diag_condition(const BinaryMatrix& m, DiagCondition cond = DiagCondition::exactly_one) {
    if (m.rows() != 3 || m.cols() != 3)
        throw Error(ErrorKind::WrongShape, "diagonal condition needs a 3x3 matrix");
    for (const auto& sigma : s3) {
        const int sum = m(0, sigma[0]) + m(1, sigma[1]) + m(2, sigma[2]);
        if (cond == DiagCondition::exactly_one ? sum != 1 : sum > 1)
            return false;
    }
    return true;
}

inline bool is_full_row_matrix(const BinaryMatrix& m) {
    if (m.total() != static_cast<int>(m.cols()))
        return false;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        int s = 0;
        for (std::size_t c = 0; c < m.cols(); ++c)
            s += m(r, c);
        if (s == static_cast<int>(m.cols()))
            return true;
    }
    return false;
}

inline bool is_full_column_matrix(const BinaryMatrix& m) {
    if (m.total() != static_cast<int>(m.rows()))
        return false;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        int s = 0;
        for (std::size_t r = 0; r < m.rows(); ++r)
            s += m(r, c);
        if (s == static_cast<int>(m.rows()))
            return true;
    }
    return false;
}

/// All 512 3x3 matrices: the diagonal condition holds exactly for the six
/// matrices whose three 1s fill one row or one column.
inline Certificate verify_lemma_matrix(DiagCondition cond = DiagCondition::exactly_one) {
    Certificate cert;
    cert.claim_id = "matrix-diagonal-lemma";
    cert.inputs = {{"condition", cond == DiagCondition::exactly_one ? "exactly_one" : "at_most_one"}};
    std::vector<bool> outcome;
    json counterexamples = json::array();
    json satisfiers = json::array();
    int count = 0;
    bool sums_ok = true;
    for (std::uint64_t code = 0; code < 512; ++code) {
        const auto m = BinaryMatrix::from_code(3, 3, code);
        const bool holds = check_diag_condition(m, cond);
        const bool line = is_full_row_matrix(m) || is_full_column_matrix(m);
        outcome.push_back(holds);
        if (holds) {
            ++count;
            satisfiers.push_back(m.str());
            // Row sums or column sums are a permutation of (3, 0, 0).
            std::array<int, 3> rs{}, cs{};
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    rs[r] += m(r, c), cs[c] += m(r, c);
            auto is_300 = [](std::array<int, 3> v) {
                std::sort(v.begin(), v.end());
                return v == std::array<int, 3>{0, 0, 3};
            };
            sums_ok &= is_300(rs) || is_300(cs);
        }
        if (holds != line && counterexamples.size() < max_counterexamples)
            counterexamples.push_back({{"matrix", m.str()}, {"condition", holds}, {"single_line", line}});
    }
    const bool pass = counterexamples.empty() && count == 6 && sums_ok;
    cert.verdict = pass ? verdict::pass : verdict::fail;
    cert.payload = {{"enumerated", 512},
                    {"satisfying_count", count},
                    {"satisfiers", satisfiers},
                    {"line_sums_are_300", sums_ok},
                    {"counterexamples", counterexamples},
                    {"outcome_hash", outcome_vector_hash(outcome)}};
    return cert;
}

/// Rows a,b,c,d = 0..3; the hypothesis is the diagonal condition on the row
/// triples abc, abd and acd.
inline bool four_by_three_hypothesis(const BinaryMatrix& m) {
    if (m.rows() != 4 || m.cols() != 3)
        throw Error(ErrorKind::WrongShape, "expected a 4x3 matrix");
    return check_diag_condition(m.select_rows({0, 1, 2})) && check_diag_condition(m.select_rows({0, 1, 3})) &&
           check_diag_condition(m.select_rows({0, 2, 3}));
}

/// Shape (i): a-row all 1s, everything else 0. Shape (ii): one full column.
inline bool is_a_row_shape(const BinaryMatrix& m) {
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (m(r, c) != (r == 0 ? 1 : 0))
                return false;
    return true;
}

inline Certificate verify_lemma_four_by_three() {
    Certificate cert;
    cert.claim_id = "four-by-three-lemma";
    std::vector<bool> outcome;
    json satisfiers = json::array();
    json counterexamples = json::array();
    int count = 0;
    for (std::uint64_t code = 0; code < 4096; ++code) {
        const auto m = BinaryMatrix::from_code(4, 3, code);
        const bool holds = four_by_three_hypothesis(m);
        const bool shape = is_a_row_shape(m) || is_full_column_matrix(m);
        outcome.push_back(holds);
        if (holds) {
            ++count;
            satisfiers.push_back({{"matrix", m.str()}, {"shape", is_a_row_shape(m) ? "a-row" : "column"}});
        }
        if (holds != shape && counterexamples.size() < max_counterexamples)
            counterexamples.push_back({{"matrix", m.str()}, {"hypothesis", holds}, {"shape", shape}});
    }
    const bool pass = counterexamples.empty() && count == 4;
    cert.verdict = pass ? verdict::pass : verdict::fail;
    cert.payload = {{"enumerated", 4096},
                    {"satisfying_count", count},
                    {"satisfiers", satisfiers},
                    {"counterexamples", counterexamples},
                    {"outcome_hash", outcome_vector_hash(outcome)}};
    return cert;
}

/// Hypothesis check on the 4x3 apex-indicator matrix of one Fstar edge
/// (rows a..d, columns the edge's three vertices).
inline bool verify_apex_pattern(const std::array<int, 3>& edge, const BinaryMatrix& assignment) {
    if (assignment.rows() != 4 || assignment.cols() != 3)
        throw Error(ErrorKind::WrongShape, "apex pattern needs a 4x3 matrix");
    for (int v : edge)
        if (v < 1 || v > 7)
            throw Error(ErrorKind::OutOfRange, "edge vertices are labelled 1..7");
    return four_by_three_hypothesis(assignment);
}

// ---------------------------------------------------------------------------
// Exactly-one labellings

using Edge3 = std::array<int, 3>;

/// Fstar with vertices 1..7, kept as its own literal.
inline const std::vector<Edge3>& fstar_edges() {
    static const std::vector<Edge3> e{{1, 2, 3}, {1, 2, 4}, {3, 4, 5}, {1, 5, 6}, {2, 5, 7}};
    return e;
}

struct LabellingCount {
    std::size_t enumerated = 0;
    std::size_t feasible_integer = 0;  // s_i + s_j + s_k = 1 over the integers for every edge
    std::size_t feasible_f2 = 0;       // the same sums taken mod 2
    std::size_t max_satisfied = 0;     // most integer equations met by one labelling
    std::vector<std::uint32_t> integer_solutions;
    std::vector<bool> outcome;
};

/// Vertices are 1..n; labelling bit (v - 1) is s_v.
inline LabellingCount count_exactly_one_labellings(int n, const std::vector<Edge3>& edges) {
    if (n < 0 || n > 20)
        throw Error(ErrorKind::TooLarge, "labelling enumeration limited to 20 vertices");
    LabellingCount out;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
        std::size_t satisfied = 0, parity_ok = 0;
        for (const auto& e : edges) {
            int sum = 0;
            for (int v : e)
                sum += static_cast<int>((s >> (v - 1)) & 1U);
            satisfied += sum == 1;
            parity_ok += (sum & 1) == 1;
        }
        ++out.enumerated;
        const bool feasible = satisfied == edges.size();
        out.outcome.push_back(feasible);
        if (feasible) {
            ++out.feasible_integer;
            out.integer_solutions.push_back(s);
        }
        out.feasible_f2 += parity_ok == edges.size();
        out.max_satisfied = std::max(out.max_satisfied, satisfied);
    }
    return out;
}

inline Certificate verify_fstar_labelling_infeasible() {
    Certificate cert;
    cert.claim_id = "fstar-exactly-one-labelling";
    const auto count = count_exactly_one_labellings(7, fstar_edges());
    cert.verdict = count.feasible_integer == 0 && count.enumerated == 128 ? verdict::pass : verdict::fail;
    json edges = json::array();
    for (const auto& e : fstar_edges())
        edges.push_back(e);
    cert.inputs = {{"edges", edges}};
    cert.payload = {{"enumerated", count.enumerated},
                    {"feasible_integer", count.feasible_integer},
                    {"feasible_f2", count.feasible_f2},
                    {"max_equations_satisfied", count.max_satisfied},
                    {"equations", fstar_edges().size()},
                    {"outcome_hash", outcome_vector_hash(count.outcome)}};
    return cert;
}

// ---------------------------------------------------------------------------
// Rank-three evaluation table

/// Apex forms and bottom points of the explicit map into R(F2^3, {X,Y,Z}),
/// indexed by Fstar vertex 1..7 (slot 0 unused). Bit i is coordinate i.
struct Rank3Table {
    std::array<std::uint32_t, 8> form{};
    std::array<std::uint32_t, 8> point{};
};

inline Rank3Table rank3_table_inputs() {
    constexpr std::uint32_t X = 1, Y = 2, Z = 4;
    Rank3Table t;
    t.form = {0, X, X, Y, Y, Z, X, X};
    // 000, 010, 100, 101, 110, 001, 001 written coordinate 0 first.
    t.point = {0, 0b000, 0b010, 0b001, 0b101, 0b011, 0b100, 0b100};
    return t;
}

inline int f2_eval(std::uint32_t form, std::uint32_t v) {
    return std::popcount(form & v) & 1;
}

inline Certificate verify_rank3_table() {
    Certificate cert;
    cert.claim_id = "rank3-evaluation-table";
    const auto t = rank3_table_inputs();
    json rows = json::array();
    json mismatches = json::array();
    std::vector<bool> outcome;
    for (const auto& e : fstar_edges()) {
        json row = json::array();
        for (int rot = 0; rot < 3; ++rot) {
            const int i = e[rot], j = e[(rot + 1) % 3], k = e[(rot + 2) % 3];
            const int value = f2_eval(t.form[i], t.point[j] ^ t.point[k]);
            row.push_back(value);
            outcome.push_back(value == 1);
            if (value != 1)
                mismatches.push_back({{"apex", i}, {"pair", {j, k}}, {"value", value}});
        }
        rows.push_back({{"edge", e}, {"values", row}});
    }
    cert.verdict = mismatches.empty() ? verdict::pass : verdict::fail;
    cert.payload = {{"cells", outcome.size()},
                    {"table", rows},
                    {"mismatches", mismatches},
                    {"outcome_hash", outcome_vector_hash(outcome)}};
    return cert;
}

/// Records that the three checks above jointly rule out the all-column case:
/// a full column per edge would be an exactly-one labelling of Fstar.
inline Certificate column_type_excluded(const Certificate& matrix, const Certificate& four_by_three,
                                        const Certificate& labelling) {
    Certificate cert;
    cert.claim_id = "column-type-excluded";
    const bool all = matrix.established() && four_by_three.established() && labelling.established();
    cert.verdict = all ? verdict::pass : verdict::fail;
    cert.inputs = {{"premises",
                    {{{"claim_id", matrix.claim_id}, {"content_hash", matrix.content_hash()}},
                     {{"claim_id", four_by_three.claim_id}, {"content_hash", four_by_three.content_hash()}},
                     {{"claim_id", labelling.claim_id}, {"content_hash", labelling.content_hash()}}}}};
    cert.payload = {
        {"statement",
         {{"if", "every edge of Fstar has a column-type apex matrix under a map F -> R2"},
          {"then", "the all-apex columns give a labelling with exactly one 1 per Fstar edge"},
          {"but", "no such labelling exists among 128"},
          {"so", "the column-type case is impossible"}}},
        {"premises_established", all}};
    return cert;
}

} // namespace hyperstab::oracles
