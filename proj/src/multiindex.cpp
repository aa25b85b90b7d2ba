#include "expoly/multiindex.hpp"

#include <limits>
#include <stdexcept>

namespace expoly {

void MultiIndex::validate() const {
    for (int x : v_)
        if (x < 0) throw std::invalid_argument("MultiIndex: negative entry");
}

int MultiIndex::degree() const {
    int d = 0;
    for (int x : v_) d += x;
    return d;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    if (dim() != o.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
    MultiIndex r(dim());
    for (int i = 0; i < dim(); ++i) r[i] = v_[static_cast<size_t>(i)] + o[i];
    return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
    if (dim() != o.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
    MultiIndex r(dim());
    for (int i = 0; i < dim(); ++i) {
        int d = v_[static_cast<size_t>(i)] - o[i];
        if (d < 0) throw std::invalid_argument("MultiIndex: subtraction below zero");
        r[i] = d;
    }
    return r;
}

bool MultiIndex::leq(const MultiIndex& o) const {
    if (dim() != o.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
    for (int i = 0; i < dim(); ++i)
        if (v_[static_cast<size_t>(i)] > o[i]) return false;
    return true;
}

std::string MultiIndex::to_string() const {
    std::string s;
    for (int i = 0; i < dim(); ++i) {
        if (i) s += ',';
        s += std::to_string(v_[static_cast<size_t>(i)]);
    }
    return s;
}

bool grlex_before(const MultiIndex& a, const MultiIndex& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // within a degree the lexicographically larger tuple (x1 heaviest) first
    for (int i = 0; i < a.dim(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

std::vector<MultiIndex> degree_slice(int dim, int n) {
    if (dim < 1) throw std::invalid_argument("degree_slice: dim must be >= 1");
    if (n < 0) return {};
    std::vector<MultiIndex> out;
    MultiIndex cur(dim);
    // first coordinate runs from n down to 0, recursively
    auto rec = [&](auto&& self, int coord, int rem) -> void {
        if (coord == dim - 1) {
            cur[coord] = rem;
            out.push_back(cur);
            return;
        }
        for (int k = rem; k >= 0; --k) {
            cur[coord] = k;
            self(self, coord + 1, rem - k);
        }
    };
    rec(rec, 0, n);
    return out;
}

GradedEnumerator::GradedEnumerator(int dim) : dim_(dim), slice_(degree_slice(dim, 0)) {
    if (dim < 1) throw std::invalid_argument("GradedEnumerator: dim must be >= 1");
}

MultiIndex GradedEnumerator::next() {
    if (pos_ >= slice_.size()) {
        ++degree_;
        pos_ = 0;
        slice_ = degree_slice(dim_, degree_);
    }
    return slice_[pos_++];
}

IndexSet::IndexSet(int dim, std::vector<MultiIndex> elems)
    : dim_(dim), elems_(std::move(elems)) {
    for (int i = 0; i < size(); ++i) {
        if (elems_[static_cast<size_t>(i)].dim() != dim_)
            throw std::invalid_argument("IndexSet: element dimension mismatch");
        auto [it, fresh] = pos_.emplace(elems_[static_cast<size_t>(i)], i);
        (void)it;
        if (!fresh) throw std::invalid_argument("IndexSet: duplicate element");
    }
}

int IndexSet::position(const MultiIndex& a) const {
    auto it = pos_.find(a);
    return it == pos_.end() ? -1 : it->second;
}

bool IndexSet::is_lower_set() const {
    for (const auto& a : elems_) {
        for (int j = 0; j < dim_; ++j) {
            if (a[j] == 0) continue;
            MultiIndex b = a;
            b[j] -= 1;
            if (!contains(b)) return false;
        }
    }
    return true;
}

int IndexSet::max_degree() const {
    int d = -1;
    for (const auto& a : elems_) d = std::max(d, a.degree());
    return d;
}

IndexSet total_degree_set(int dim, int n) {
    if (dim < 1) throw std::invalid_argument("total_degree_set: dim must be >= 1");
    if (n < 0) throw std::invalid_argument("total_degree_set: n must be >= 0");
    std::vector<MultiIndex> elems;
    for (int d = 0; d <= n; ++d) {
        auto slice = degree_slice(dim, d);
        elems.insert(elems.end(), slice.begin(), slice.end());
    }
    return IndexSet(dim, std::move(elems));
}

IndexSet hyperbolic_set(int dim, int n) {
    if (dim < 1) throw std::invalid_argument("hyperbolic_set: dim must be >= 1");
    if (n < 1) throw std::invalid_argument("hyperbolic_set: n must be >= 1");
    std::vector<MultiIndex> elems;
    MultiIndex cur(dim);
    auto rec = [&](auto&& self, int coord, long long prod) -> void {
        if (coord == dim) {
            elems.push_back(cur);
            return;
        }
        for (int k = 0;; ++k) {
            long long p = prod * (1 + k);
            if (p > n) break;
            cur[coord] = k;
            self(self, coord + 1, p);
        }
        cur[coord] = 0;
    };
    rec(rec, 0, 1);
    std::sort(elems.begin(), elems.end(), GrlexLess{});
    return IndexSet(dim, std::move(elems));
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        // r * num is exact before the division because r holds C(n-k+i-1, i-1)
        if (r > std::numeric_limits<std::uint64_t>::max() / num)
            throw std::overflow_error("binomial: 64-bit overflow");
        r = r * num / static_cast<std::uint64_t>(i);
    }
    return r;
}

} // namespace expoly
