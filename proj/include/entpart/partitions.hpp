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

#pragma once

// Set partitions of a qubit register.
//
// A SetPartition is stored canonically: each part ascending, parts ordered by size and then
// by smallest element. Human-facing strings use 1-based indices, e.g. "[[1],[2,3],[4,5,6]]".

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entpart/errors.hpp"
#include "entpart/linalg.hpp"

namespace entpart {

/// Ascending list of part sizes.
using PartitionShape = std::vector<int>;

class SetPartition {
   public:
    SetPartition() = default;
    explicit SetPartition(std::vector<QubitIndexSet> parts) : parts_(std::move(parts)) {
        for (const auto& p : parts_)
            if (p.empty()) throw InvalidArgument("SetPartition: empty part");
        std::sort(parts_.begin(), parts_.end(), [](const QubitIndexSet& a, const QubitIndexSet& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a.front() < b.front();
        });
        std::vector<int> all;
        for (const auto& p : parts_) all.insert(all.end(), p.begin(), p.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
            throw InvalidArgument("SetPartition: parts are not disjoint");
        }
    }
    SetPartition(std::initializer_list<std::initializer_list<int>> parts) : SetPartition(to_parts(parts)) {}

    const std::vector<QubitIndexSet>& parts() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    auto begin() const { return parts_.begin(); }
    auto end() const { return parts_.end(); }

    /// Union of all parts.
    QubitIndexSet elements() const {
        std::vector<int> all;
        for (const auto& p : parts_) all.insert(all.end(), p.begin(), p.end());
        return QubitIndexSet(std::move(all));
    }

    /// Number of qubits covered.
    int n_elements() const {
        std::size_t n = 0;
        for (const auto& p : parts_) n += p.size();
        return static_cast<int>(n);
    }

    /// True when the parts cover exactly {0, ..., n-1}.
    bool covers_register(int n) const { return elements() == QubitIndexSet::range(n); }

    PartitionShape shape() const {
        PartitionShape s;
        for (const auto& p : parts_) s.push_back(static_cast<int>(p.size()));
        return s;
    }

    /// 1-based display string, e.g. "[[1],[2,3]]".
    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += '[';
            for (std::size_t j = 0; j < parts_[i].size(); ++j) {
                if (j) s += ',';
                s += std::to_string(parts_[i][j] + 1);
            }
            s += ']';
        }
        return s + "]";
    }

    /// Parses the 1-based display format; whitespace is ignored.
    static SetPartition parse(std::string_view text) {
        std::string t;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        auto fail = [&](const std::string& why) -> SetPartition {
            throw InvalidArgument("cannot parse partition '" + std::string(text) + "': " + why);
        };
        if (t.size() < 2 || t.front() != '[' || t.back() != ']') return fail("expected outer brackets");
        std::vector<QubitIndexSet> parts;
        std::size_t pos = 1;
        const std::size_t end = t.size() - 1;
        while (pos < end) {
            if (t[pos] != '[') return fail("expected '['");
            const std::size_t close = t.find(']', pos);
            if (close == std::string::npos || close >= end) return fail("unterminated part");
            std::vector<int> idx;
            std::size_t p = pos + 1;
            while (p < close) {
                std::size_t q = p;
                while (q < close && std::isdigit(static_cast<unsigned char>(t[q]))) ++q;
                if (q == p) return fail("expected qubit number");
                const int v = std::stoi(t.substr(p, q - p));
                if (v < 1) return fail("qubit numbers are 1-based");
                idx.push_back(v - 1);
                p = q;
                if (p < close) {
                    if (t[p] != ',') return fail("expected ','");
                    ++p;
                    if (p == close) return fail("trailing ','");
                }
            }
            if (idx.empty()) return fail("empty part");
            parts.emplace_back(std::move(idx));
            pos = close + 1;
            if (pos < end) {
                if (t[pos] != ',') return fail("expected ',' between parts");
                ++pos;
                if (pos == end) return fail("trailing ','");
            }
        }
        return SetPartition(std::move(parts));
    }

    friend bool operator==(const SetPartition&, const SetPartition&) = default;
    /// Canonical label order: fewer parts first, then by shape, then lexicographic on parts.
    friend bool operator<(const SetPartition& a, const SetPartition& b) {
        if (a.parts_.size() != b.parts_.size()) return a.parts_.size() < b.parts_.size();
        const auto sa = a.shape(), sb = b.shape();
        if (sa != sb) return sa < sb;
        return a.parts_ < b.parts_;
    }

   private:
    static std::vector<QubitIndexSet> to_parts(std::initializer_list<std::initializer_list<int>> parts) {
        std::vector<QubitIndexSet> out;
        for (const auto& p : parts) out.emplace_back(std::vector<int>(p));
        return out;
    }

    std::vector<QubitIndexSet> parts_;
};

inline constexpr int kMaxPartitionQubits = 10;

namespace detail {

inline void check_partition_size(int n) {
    if (n < 0 || n > kMaxPartitionQubits) {
        throw InvalidArgument("partition enumeration supports 0..10 elements, got " + std::to_string(n));
    }
}

/// Calls f(rgs) for every restricted-growth string of length n, in lexicographic order.
template <typename F>
void for_each_restricted_growth(int n, F&& f) {
    if (n == 0) {
        f(std::vector<int>{});
        return;
    }
    std::vector<int> a(static_cast<std::size_t>(n), 0), mx(static_cast<std::size_t>(n), 0);
    while (true) {
        f(std::as_const(a));
        int i = n - 1;
        while (i > 0 && a[static_cast<std::size_t>(i)] == mx[static_cast<std::size_t>(i - 1)] + 1) --i;
        if (i == 0) return;
        ++a[static_cast<std::size_t>(i)];
        const int m = std::max(mx[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
        mx[static_cast<std::size_t>(i)] = m;
        for (int j = i + 1; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = 0;
            mx[static_cast<std::size_t>(j)] = m;
        }
    }
}

inline std::vector<SetPartition> partitions_over(const std::vector<int>& elems) {
    std::vector<SetPartition> out;
    for_each_restricted_growth(static_cast<int>(elems.size()), [&](const std::vector<int>& rgs) {
        const int blocks = rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<int>> parts(static_cast<std::size_t>(blocks));
        for (std::size_t i = 0; i < rgs.size(); ++i) parts[static_cast<std::size_t>(rgs[i])].push_back(elems[i]);
        std::vector<QubitIndexSet> ps;
        for (auto& p : parts) ps.emplace_back(std::move(p));
        out.emplace_back(std::move(ps));
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline void integer_partitions_rec(int remaining, int min_part, PartitionShape& cur,
                                   std::vector<PartitionShape>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = min_part; p <= remaining; ++p) {
        cur.push_back(p);
        integer_partitions_rec(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

/// Every set partition of {0, ..., n-1}, Bell(n) of them, in canonical label order.
inline std::vector<SetPartition> all_partitions(int n) {
    detail::check_partition_size(n);
    return detail::partitions_over(QubitIndexSet::range(n).indices());
}

/// Non-decreasing integer partitions of n (part sizes ascending).
inline std::vector<PartitionShape> integer_partitions(int n) {
    detail::check_partition_size(n);
    std::vector<PartitionShape> out;
    PartitionShape cur;
    detail::integer_partitions_rec(n, 1, cur, out);
    return out;
}

/// One representative per shape: sizes non-decreasing, consecutive indices filled left to right.
inline std::vector<SetPartition> ordered_partitions(int n) {
    std::vector<SetPartition> out;
    for (const auto& shape : integer_partitions(n)) {
        std::vector<QubitIndexSet> parts;
        int next = 0;
        for (int size : shape) {
            std::vector<int> idx;
            for (int i = 0; i < size; ++i) idx.push_back(next++);
            parts.emplace_back(std::move(idx));
        }
        out.emplace_back(std::move(parts));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Partitions of an arbitrary index set; |s| <= 8.
inline std::vector<SetPartition> partitions_of_set(const QubitIndexSet& s) {
    if (s.size() > 8) throw InvalidArgument("partitions_of_set: at most 8 elements supported");
    return detail::partitions_over(s.indices());
}

/// Unordered splits of `part` into two non-empty sides; the side holding the smallest index comes first.
inline std::vector<std::pair<QubitIndexSet, QubitIndexSet>> bipartitions(const QubitIndexSet& part) {
    const std::size_t m = part.size();
    if (m < 2) throw InvalidArgument("bipartitions: part needs at least 2 qubits");
    if (m > 20) throw InvalidArgument("bipartitions: part too large");
    std::vector<std::pair<QubitIndexSet, QubitIndexSet>> out;
    const std::uint32_t rest = (1u << (m - 1)) - 1;
    // element 0 is always on side A; enumerate which of the other m-1 elements join it
    for (std::uint32_t sel = 0; sel < rest; ++sel) {
        std::vector<int> a{part[0]}, b;
        for (std::size_t i = 1; i < m; ++i) (sel >> (i - 1) & 1u ? a : b).push_back(part[i]);
        out.emplace_back(QubitIndexSet(std::move(a)), QubitIndexSet(std::move(b)));
    }
    return out;
}

/// Number of qubits in parts of size > 1.
inline int entangled_qubit_count(const SetPartition& p) {
    int n = 0;
    for (const auto& part : p)
        if (part.size() > 1) n += static_cast<int>(part.size());
    return n;
}

inline bool is_fully_separable(const SetPartition& p) { return entangled_qubit_count(p) == 0; }

}  // namespace entpart
