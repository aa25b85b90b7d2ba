#ifndef EXPOLY_MULTIINDEX_HPP
#define EXPOLY_MULTIINDEX_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace expoly {

// Exponent multiindex in N_0^s. Grid points of Z^s (which may be negative)
// are plain std::vector<int>; a MultiIndex converts to one implicitly.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int dim) : v_(static_cast<size_t>(dim), 0) {}
    MultiIndex(std::initializer_list<int> init) : v_(init) { validate(); }
    explicit MultiIndex(std::vector<int> v) : v_(std::move(v)) { validate(); }

    int dim() const { return static_cast<int>(v_.size()); }
    int operator[](int i) const { return v_[static_cast<size_t>(i)]; }
    int& operator[](int i) { return v_[static_cast<size_t>(i)]; }

    // total degree |alpha|
    int degree() const;

    const std::vector<int>& data() const { return v_; }
    operator const std::vector<int>&() const { return v_; }

    bool operator==(const MultiIndex& o) const { return v_ == o.v_; }
    bool operator!=(const MultiIndex& o) const { return v_ != o.v_; }

    MultiIndex operator+(const MultiIndex& o) const;
    // componentwise difference; caller must ensure o <= *this
    MultiIndex operator-(const MultiIndex& o) const;

    // componentwise partial order
    bool leq(const MultiIndex& o) const;

    std::string to_string() const; // "a1,a2,...,as"

private:
    void validate() const;
    std::vector<int> v_;
};

// Canonical enumeration order: by total degree, ties broken so that the
// lexicographically larger index (x1 heaviest) comes first. gamma_set(2,2)
// enumerates (0,0),(1,0),(0,1),(2,0),(1,1),(0,2).
bool grlex_before(const MultiIndex& a, const MultiIndex& b);

struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return grlex_before(a, b);
    }
};

// All multiindices of total degree exactly n, in canonical order.
std::vector<MultiIndex> degree_slice(int dim, int n);

// Yields the canonical graded enumeration (0,...), degree 1, degree 2, ...
class GradedEnumerator {
public:
    explicit GradedEnumerator(int dim);
    MultiIndex next();
    int current_degree() const { return degree_; }

private:
    int dim_;
    int degree_ = 0;
    size_t pos_ = 0;
    std::vector<MultiIndex> slice_;
};

// Ordered exponent set with O(log) membership and positions.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(int dim, std::vector<MultiIndex> elems);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elems_.size()); }
    bool empty() const { return elems_.empty(); }
    const MultiIndex& operator[](int i) const { return elems_[static_cast<size_t>(i)]; }
    const std::vector<MultiIndex>& elements() const { return elems_; }

    bool contains(const MultiIndex& a) const { return pos_.count(a) != 0; }
    // -1 if absent
    int position(const MultiIndex& a) const;

    // closed under componentwise decrease
    bool is_lower_set() const;

    int max_degree() const; // -1 when empty

private:
    int dim_ = 0;
    std::vector<MultiIndex> elems_;
    std::map<MultiIndex, int, GrlexLess> pos_;
};

// {alpha : |alpha| <= n}, cardinality C(n+s, s)
IndexSet total_degree_set(int dim, int n);

// Hyperbolic cross {alpha : prod_j (1 + alpha_j) <= n}; contains every lower
// set of cardinality <= n, which makes it a universal interpolation support.
IndexSet hyperbolic_set(int dim, int n);

// exact C(n, k) in 64 bits; throws on overflow
std::uint64_t binomial(int n, int k);

} // namespace expoly

#endif
