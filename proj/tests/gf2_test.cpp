#include "telesim/gf2.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace telesim;

namespace {

BitVec random_vec(size_t n, std::mt19937_64 &rng, double density = 0.5) {
    std::bernoulli_distribution coin(density);
    BitVec v(n);
    for (size_t i = 0; i < n; i++) v.set(i, coin(rng));
    return v;
}

}  // namespace

TEST(BitVec, basic_ops) {
    BitVec a(130);
    a.set(0);
    a.set(64);
    a.set(129);
    EXPECT_EQ(a.popcount(), 3u);
    EXPECT_EQ(a.ones(), (std::vector<size_t>{0, 64, 129}));
    EXPECT_EQ(a.first_one(), 0u);
    a.flip(0);
    EXPECT_EQ(a.first_one(), 64u);
    BitVec b(130);
    b.set(64);
    EXPECT_TRUE(a.dot(b));
    b.set(129);
    EXPECT_FALSE(a.dot(b));
    a ^= b;
    EXPECT_FALSE(a.any());
}

TEST(Gf2, rank_of_identity_and_duplicates) {
    std::vector<BitVec> rows;
    for (size_t i = 0; i < 70; i++) {
        BitVec r(70);
        r.set(i);
        rows.push_back(r);
    }
    EXPECT_EQ(gf2_rank(rows), 70u);
    rows.push_back(rows[3] ^ rows[68]);
    EXPECT_EQ(gf2_rank(rows), 70u);
}

TEST(Gf2, nullspace_vectors_are_annihilated) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; trial++) {
        size_t nrows = 5 + trial, ncols = 40;
        std::vector<BitVec> rows;
        for (size_t r = 0; r < nrows; r++) rows.push_back(random_vec(ncols, rng));
        auto ns = gf2_nullspace(rows, ncols);
        EXPECT_EQ(ns.size() + gf2_rank(rows), ncols);
        for (auto &v : ns) {
            for (auto &r : rows) EXPECT_FALSE(r.dot(v));
        }
        EXPECT_EQ(gf2_rank(ns), ns.size());
    }
}

TEST(Gf2, solver_finds_solutions_and_rejects_inconsistent) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; trial++) {
        size_t neq = 60, nv = 45;
        std::vector<BitVec> rows;
        for (size_t r = 0; r < neq; r++) rows.push_back(random_vec(nv, rng, 0.2));
        Gf2Solver solver(rows, nv);
        BitVec x = random_vec(nv, rng);
        BitVec rhs(neq);
        for (size_t r = 0; r < neq; r++) rhs.set(r, rows[r].dot(x));
        auto sol = solver.solve(rhs);
        ASSERT_TRUE(sol.has_value());
        for (size_t r = 0; r < neq; r++) EXPECT_EQ(rows[r].dot(*sol), rhs.get(r));
        if (solver.rank() < neq) {
            // Some right-hand side must be unreachable: flip bits until one is rejected.
            bool rejected = false;
            for (size_t r = 0; r < neq && !rejected; r++) {
                BitVec bad = rhs;
                bad.flip(r);
                rejected = !solver.solve(bad).has_value();
            }
            EXPECT_TRUE(rejected);
        }
    }
}
