// Copyright 2026 The entpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entpart/partitions.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace entpart;

namespace {

// Bell numbers from B(n+1) = sum_k C(n, k) B(k).
std::vector<std::uint64_t> bell_by_recurrence(int up_to) {
    std::vector<std::uint64_t> b{1};
    for (int n = 0; n < up_to; ++n) {
        std::uint64_t s = 0, c = 1;
        for (int k = 0; k <= n; ++k) {
            s += c * b[static_cast<std::size_t>(k)];
            c = c * static_cast<std::uint64_t>(n - k) / static_cast<std::uint64_t>(k + 1);
        }
        b.push_back(s);
    }
    return b;
}

// Integer partitions by brute force over all non-decreasing size sequences.
int count_integer_partitions(int remaining, int min_part) {
    if (remaining == 0) return 1;
    int total = 0;
    for (int p = min_part; p <= remaining; ++p) total += count_integer_partitions(remaining - p, p);
    return total;
}

bool is_canonical(const SetPartition& p) {
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto& a = p.parts()[i - 1];
        const auto& b = p.parts()[i];
        if (a.size() > b.size() || (a.size() == b.size() && a.front() > b.front())) return false;
    }
    return true;
}

}  // namespace

TEST(AllPartitions, BellCounts) {
    const std::vector<std::size_t> expected{1, 1, 2, 5, 15, 52, 203, 877, 4140};
    const auto oracle = bell_by_recurrence(8);
    for (int n = 0; n <= 8; ++n) {
        const auto ps = all_partitions(n);
        EXPECT_EQ(ps.size(), expected[static_cast<std::size_t>(n)]);
        EXPECT_EQ(ps.size(), oracle[static_cast<std::size_t>(n)]);
        std::set<std::string> seen;
        for (const auto& p : ps) {
            EXPECT_TRUE(is_canonical(p));
            EXPECT_TRUE(p.covers_register(n));
            seen.insert(p.to_string());
        }
        EXPECT_EQ(seen.size(), ps.size());
    }
}

TEST(AllPartitions, ThreeQubits) {
    std::vector<std::string> got;
    for (const auto& p : all_partitions(3)) got.push_back(p.to_string());
    const std::vector<std::string> expected{"[[1,2,3]]", "[[1],[2,3]]", "[[2],[1,3]]", "[[3],[1,2]]",
                                            "[[1],[2],[3]]"};
    EXPECT_EQ(got, expected);
}

TEST(AllPartitions, Deterministic) { EXPECT_EQ(all_partitions(6), all_partitions(6)); }

TEST(AllPartitions, RangeChecked) {
    EXPECT_THROW(all_partitions(-1), InvalidArgument);
    EXPECT_THROW(all_partitions(11), InvalidArgument);
}

TEST(OrderedPartitions, ThreeQubits) {
    std::vector<std::string> got;
    for (const auto& p : ordered_partitions(3)) got.push_back(p.to_string());
    EXPECT_EQ(got, (std::vector<std::string>{"[[1,2,3]]", "[[1],[2,3]]", "[[1],[2],[3]]"}));
}

TEST(OrderedPartitions, Counts) {
    const std::vector<std::size_t> expected{1, 1, 2, 3, 5, 7, 11, 15, 22};
    for (int n = 0; n <= 8; ++n) {
        EXPECT_EQ(ordered_partitions(n).size(), expected[static_cast<std::size_t>(n)]);
        EXPECT_EQ(ordered_partitions(n).size(), static_cast<std::size_t>(count_integer_partitions(n, 1)));
    }
}

TEST(OrderedPartitions, ConsecutiveFilling) {
    for (const auto& p : ordered_partitions(6)) {
        int next = 0;
        for (const auto& part : p)
            for (int q : part) EXPECT_EQ(q, next++);
    }
}

TEST(PartitionsOfSet, Counts) {
    EXPECT_EQ(partitions_of_set({0}).size(), 1u);
    EXPECT_EQ(partitions_of_set({0, 3, 5, 7}).size(), 15u);
    const auto two = partitions_of_set({0, 1});
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].to_string(), "[[1,2]]");
    EXPECT_EQ(two[1].to_string(), "[[1],[2]]");
    EXPECT_THROW(partitions_of_set(QubitIndexSet::range(9)), InvalidArgument);
}

TEST(Bipartitions, Counts) {
    EXPECT_EQ(bipartitions({0, 1}).size(), 1u);
    EXPECT_EQ(bipartitions({0, 1, 2}).size(), 3u);
    const auto six = bipartitions(QubitIndexSet::range(6));
    EXPECT_EQ(six.size(), 31u);
    // oracle: every non-trivial subset S of 6 elements with S or its complement containing 0
    std::set<std::uint32_t> masks;
    for (std::uint32_t m = 1; m < 63; ++m) masks.insert((m & 1u) ? m : (63u ^ m));
    EXPECT_EQ(masks.size(), 31u);
    std::set<std::uint32_t> got;
    for (const auto& [a, b] : six) {
        EXPECT_TRUE(a.contains(0));
        EXPECT_FALSE(b.empty());
        EXPECT_EQ(a.mask() | b.mask(), 63u);
        EXPECT_EQ(a.mask() & b.mask(), 0u);
        got.insert(a.mask());
    }
    EXPECT_EQ(got, masks);
    EXPECT_THROW(bipartitions({3}), InvalidArgument);
}

TEST(EntangledQubitCount, Examples) {
    EXPECT_EQ(entangled_qubit_count(SetPartition{{0}, {1, 2, 3, 4, 5}}), 5);
    EXPECT_EQ(entangled_qubit_count(SetPartition{{0, 1}, {2, 3, 4, 5}}), 6);
    EXPECT_EQ(entangled_qubit_count(SetPartition{{0}, {1}, {2}}), 0);
}

TEST(SetPartition, CanonicalFormAndParsing) {
    const SetPartition p{{3, 4, 5}, {1, 2}, {0}};
    EXPECT_EQ(p.to_string(), "[[1],[2,3],[4,5,6]]");
    EXPECT_EQ(SetPartition::parse("[[4,5,6],[1],[3,2]]"), p);
    EXPECT_EQ(SetPartition::parse(" [ [1], [2,3], [4,5,6] ] "), p);
    EXPECT_EQ(p.shape(), (PartitionShape{1, 2, 3}));
    for (const auto& q : all_partitions(5)) EXPECT_EQ(SetPartition::parse(q.to_string()), q);
    EXPECT_THROW(SetPartition::parse("[[1],[1,2]]"), InvalidArgument);
    EXPECT_THROW(SetPartition::parse("[[0]]"), InvalidArgument);
    EXPECT_THROW(SetPartition::parse("[[1],]"), InvalidArgument);
    EXPECT_THROW(SetPartition::parse("[[1,2]"), InvalidArgument);
    EXPECT_THROW(SetPartition::parse("[[]]"), InvalidArgument);
}
