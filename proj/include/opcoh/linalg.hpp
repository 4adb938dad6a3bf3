#pragma once

#include "opcoh/scalar.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

namespace opcoh {

template <class S> using SVec = std::vector<std::pair<int, S>>;

template <class S>
SVec<S> unit_vec(const Ring& r, int i) { return {{i, one<S>(r)}}; }

template <class S>
SVec<S> scaled(const SVec<S>& x, const S& a) {
    SVec<S> out;
    if (a.is_zero()) return out;
    out.reserve(x.size());
    for (auto& [i, v] : x) {
        S w = v * a;
        if (!w.is_zero()) out.emplace_back(i, std::move(w));
    }
    return out;
}

// y += a*x
template <class S>
void axpy(SVec<S>& y, const S& a, const SVec<S>& x) {
    if (a.is_zero() || x.empty()) return;
    SVec<S> out;
    out.reserve(y.size() + x.size());
    size_t p = 0, q = 0;
    while (p < y.size() || q < x.size()) {
        if (q == x.size() || (p < y.size() && y[p].first < x[q].first)) {
            out.push_back(std::move(y[p++]));
        } else if (p == y.size() || x[q].first < y[p].first) {
            S w = a * x[q].second;
            if (!w.is_zero()) out.emplace_back(x[q].first, std::move(w));
            ++q;
        } else {
            S w = y[p].second + a * x[q].second;
            if (!w.is_zero()) out.emplace_back(x[q].first, std::move(w));
            ++p, ++q;
        }
    }
    y = std::move(out);
}

template <class S>
SVec<S> add(const SVec<S>& a, const SVec<S>& b, const S& cb) {
    SVec<S> r = a;
    axpy(r, cb, b);
    return r;
}

template <class S>
bool vec_equal(const SVec<S>& a, const SVec<S>& b) {
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k].first != b[k].first || a[k].second != b[k].second) return false;
    return true;
}

template <class S>
S entry(const SVec<S>& v, int i) {
    auto it = std::lower_bound(v.begin(), v.end(), i, [](const auto& e, int k) { return e.first < k; });
    if (it != v.end() && it->first == i) return it->second;
    return S();
}

template <class S>
std::vector<S> to_dense(const SVec<S>& v, int n) {
    std::vector<S> d(n);
    for (auto& [i, x] : v) d[i] = x;
    return d;
}

template <class S>
SVec<S> from_dense(const std::vector<S>& d) {
    SVec<S> v;
    for (int i = 0; i < static_cast<int>(d.size()); ++i)
        if (!d[i].is_zero()) v.emplace_back(i, d[i]);
    return v;
}

// Dense scratch space for summing many sparse contributions.
template <class S>
class Accumulator {
public:
    explicit Accumulator(int n = 0) { resize(n); }
    void resize(int n) {
        if (n > static_cast<int>(buf_.size())) {
            buf_.resize(n);
            used_.resize(n, 0);
        }
    }
    void add(int i, const S& x) {
        if (x.is_zero()) return;
        if (!used_[i]) { used_[i] = 1; touched_.push_back(i); buf_[i] = x; }
        else buf_[i] += x;
    }
    void axpy(const S& a, const SVec<S>& x) {
        if (a.is_zero()) return;
        for (auto& [i, v] : x) add(i, a * v);
    }
    void axpy(const SVec<S>& x) {
        for (auto& [i, v] : x) add(i, v);
    }
    SVec<S> take() {
        std::sort(touched_.begin(), touched_.end());
        SVec<S> out;
        out.reserve(touched_.size());
        for (int i : touched_) {
            if (!buf_[i].is_zero()) out.emplace_back(i, std::move(buf_[i]));
            buf_[i] = S();
            used_[i] = 0;
        }
        touched_.clear();
        return out;
    }

private:
    std::vector<S> buf_;
    std::vector<char> used_;
    std::vector<int> touched_;
};

template <class S>
struct Matrix {
    Ring ring;
    int rows = 0, cols = 0;
    std::vector<SVec<S>> r;

    Matrix() = default;
    Matrix(const Ring& rg, int m, int n) : ring(rg), rows(m), cols(n), r(m) {}

    S at(int i, int j) const { return entry(r[i], j); }
    void set(int i, int j, const S& x) {
        auto& row = r[i];
        auto it = std::lower_bound(row.begin(), row.end(), j, [](const auto& e, int k) { return e.first < k; });
        if (it != row.end() && it->first == j) {
            if (x.is_zero()) row.erase(it);
            else it->second = x;
        } else if (!x.is_zero()) {
            row.insert(it, {j, x});
        }
    }
    SVec<S> apply(const SVec<S>& v) const {
        SVec<S> out;
        for (int i = 0; i < rows; ++i) {
            S s;
            size_t p = 0, q = 0;
            while (p < r[i].size() && q < v.size()) {
                if (r[i][p].first < v[q].first) ++p;
                else if (v[q].first < r[i][p].first) ++q;
                else s += r[i][p++].second * v[q++].second;
            }
            if (!s.is_zero()) out.emplace_back(i, s);
        }
        return out;
    }
    Matrix transpose() const {
        Matrix t(ring, cols, rows);
        for (int i = 0; i < rows; ++i)
            for (auto& [j, x] : r[i]) t.r[j].emplace_back(i, x);
        return t;
    }
    static Matrix identity(const Ring& rg, int n) {
        Matrix m(rg, n, n);
        for (int i = 0; i < n; ++i) m.r[i] = unit_vec<S>(rg, i);
        return m;
    }
};

// Row echelon form over a field with leading-entry pivots. Rows are normalized
// so the pivot coefficient is 1 and are zero at the pivots of earlier rows.
template <class S>
class Echelon {
public:
    Echelon() = default;
    explicit Echelon(int ncols) : ncols_(ncols), pivot_row_(ncols, -1), acc_(ncols), mark_(ncols, 0) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<SVec<S>>& rows() const { return rows_; }
    int pivot_row(int col) const { return pivot_row_[col]; }
    int pivot_of(int row) const { return rows_[row].front().first; }

    // Residual of v modulo the row space; zero at every pivot column.
    SVec<S> reduce(const SVec<S>& v, std::vector<std::pair<int, S>>* used = nullptr) const {
        std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
        for (auto& [i, x] : v) {
            if (x.is_zero()) continue;
            acc_[i] += x;
            if (!mark_[i]) { mark_[i] = 1; heap.push(i); }
        }
        SVec<S> out;
        while (!heap.empty()) {
            int c = heap.top();
            heap.pop();
            mark_[c] = 0;
            S a = std::move(acc_[c]);
            acc_[c] = S();
            if (a.is_zero()) continue;
            int r = pivot_row_[c];
            if (r < 0) { out.emplace_back(c, std::move(a)); continue; }
            if (used) used->emplace_back(r, a);
            const auto& row = rows_[r];
            for (size_t k = 1; k < row.size(); ++k) {
                int j = row[k].first;
                acc_[j] -= a * row[k].second;
                if (!mark_[j]) { mark_[j] = 1; heap.push(j); }
            }
        }
        return out;
    }

    // Returns the index of the new row, or -1 if v was dependent.
    int insert(const SVec<S>& v) {
        SVec<S> res = reduce(v);
        if (res.empty()) return -1;
        S inv = res.front().second.inverse();
        for (auto& e : res) e.second *= inv;
        pivot_row_[res.front().first] = rank();
        rows_.push_back(std::move(res));
        return rank() - 1;
    }
    bool contains(const SVec<S>& v) const { return reduce(v).empty(); }

    // Fully reduced rows sorted by pivot column.
    std::vector<SVec<S>> rref() const {
        std::vector<int> order(rank());
        for (int i = 0; i < rank(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return pivot_of(a) < pivot_of(b); });
        std::vector<SVec<S>> full(rank());
        std::vector<int> done(ncols_, -1);
        for (int t = rank() - 1; t >= 0; --t) {
            int i = order[t];
            const auto& row = rows_[i];
            SVec<S> v = row;
            for (size_t k = 1; k < row.size(); ++k) {
                int j = row[k].first;
                if (pivot_row_[j] >= 0) axpy(v, -row[k].second, full[done[j]]);
            }
            full[t] = std::move(v);
            done[pivot_of(i)] = t;
        }
        return full;
    }

    std::vector<int> pivots() const {
        std::vector<int> p;
        for (auto& row : rows_) p.push_back(row.front().first);
        std::sort(p.begin(), p.end());
        return p;
    }

private:
    int ncols_ = 0;
    std::vector<SVec<S>> rows_;
    std::vector<int> pivot_row_;
    mutable std::vector<S> acc_;
    mutable std::vector<char> mark_;
};

template <class S>
struct RrefResult {
    int rank = 0;
    std::vector<int> pivots;
    std::vector<SVec<S>> rows;       // reduced rows, sorted by pivot
    std::vector<SVec<S>> kernel;     // basis of {x : m x = 0}
};

template <class S>
std::vector<SVec<S>> kernel_from_rref(const Ring& ring, int cols, const std::vector<SVec<S>>& rows) {
    std::vector<char> is_pivot(cols, 0);
    for (auto& r : rows) is_pivot[r.front().first] = 1;
    std::vector<std::vector<std::pair<int, S>>> by_free(cols);
    for (auto& r : rows)
        for (size_t k = 1; k < r.size(); ++k) by_free[r[k].first].emplace_back(r.front().first, -r[k].second);
    std::vector<SVec<S>> ker;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        SVec<S> v = by_free[f];
        v.emplace_back(f, one<S>(ring));
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        ker.push_back(std::move(v));
    }
    return ker;
}

namespace detail {
template <class S>
RrefResult<S> rref_field(const Matrix<S>& m) {
    Echelon<S> e(m.cols);
    for (auto& row : m.r) e.insert(row);
    RrefResult<S> out;
    out.rows = e.rref();
    out.rank = e.rank();
    for (auto& r : out.rows) out.pivots.push_back(r.front().first);
    out.kernel = kernel_from_rref(m.ring, m.cols, out.rows);
    return out;
}

// Gauss-Jordan over a local ring: pivots must be units.
template <class S>
RrefResult<S> rref_unit_pivot(const Matrix<S>& m) {
    std::vector<std::vector<S>> a(m.rows, std::vector<S>(m.cols));
    for (int i = 0; i < m.rows; ++i)
        for (auto& [j, x] : m.r[i]) a[i][j] = x;
    int row = 0;
    RrefResult<S> out;
    for (int c = 0; c < m.cols && row < m.rows; ++c) {
        int piv = -1;
        bool nonzero = false;
        for (int i = row; i < m.rows; ++i) {
            if (a[i][c].is_zero()) continue;
            nonzero = true;
            if (is_unit(a[i][c])) { piv = i; break; }
        }
        if (piv < 0) {
            if (nonzero)
                throw DomainError("NonUnitPivot", "column " + std::to_string(c) + " has no unit pivot");
            continue;
        }
        std::swap(a[piv], a[row]);
        S inv = a[row][c].inverse();
        for (auto& x : a[row]) x *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || a[i][c].is_zero()) continue;
            S f = a[i][c];
            for (int j = c; j < m.cols; ++j) a[i][j] -= f * a[row][j];
        }
        out.pivots.push_back(c);
        ++row;
    }
    out.rank = row;
    for (int i = 0; i < row; ++i) out.rows.push_back(from_dense(a[i]));
    out.kernel = kernel_from_rref(m.ring, m.cols, out.rows);
    return out;
}
}  // namespace detail

template <class S>
RrefResult<S> rref(const Matrix<S>& m) {
    if constexpr (scalar_traits<S>::truncated) return detail::rref_unit_pivot(m);
    else return detail::rref_field(m);
}

template <class S>
int rank(const Matrix<S>& m) { return rref(m).rank; }

// Expands a matrix over k[t]/(t^J) into the k-linear map on k^{J*cols}:
// index (j, level) -> j*J + level.
template <class K>
Matrix<K> expand_to_base(const Matrix<TruncPoly<K>>& m) {
    int J = m.ring.order;
    Matrix<K> out(m.ring.residue_field(), m.rows * J, m.cols * J);
    for (int i = 0; i < m.rows; ++i)
        for (auto& [j, a] : m.r[i])
            for (int u = 0; u < J; ++u)
                for (int v = 0; v <= u; ++v) {
                    K c = a.coeff(u - v);
                    if (!c.is_zero()) out.r[i * J + u].emplace_back(j * J + v, c);
                }
    for (auto& row : out.r)
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

// Particular solution of A x = b, or nullopt if inconsistent.
template <class S>
std::optional<SVec<S>> solve(const Matrix<S>& a, const SVec<S>& b) {
    Echelon<S> e(a.cols + 1);
    for (int i = 0; i < a.rows; ++i) {
        SVec<S> row = a.r[i];
        S bi = entry(b, i);
        if (!bi.is_zero()) row.emplace_back(a.cols, bi);
        e.insert(row);
    }
    for (auto& r : e.rows())
        if (r.front().first == a.cols) return std::nullopt;
    SVec<S> x;
    for (auto& r : e.rref()) {
        S v = r.back().first == a.cols ? r.back().second : S();
        if (!v.is_zero()) x.emplace_back(r.front().first, v);
    }
    std::sort(x.begin(), x.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    return x;
}

template <class S>
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(int ambient) : ech_(ambient) {}

    static Subspace span(int ambient, const std::vector<SVec<S>>& vs) {
        Subspace s(ambient);
        for (auto& v : vs) s.add(v);
        return s;
    }
    static Subspace full(const Ring& r, int ambient) {
        Subspace s(ambient);
        for (int i = 0; i < ambient; ++i) s.add(unit_vec<S>(r, i));
        return s;
    }

    bool add(const SVec<S>& v) {
        if (ech_.insert(v) < 0) return false;
        cache_.reset();
        return true;
    }
    int ambient() const { return ech_.ncols(); }
    int dim() const { return ech_.rank(); }
    bool contains(const SVec<S>& v) const { return ech_.contains(v); }
    SVec<S> reduce(const SVec<S>& v) const { return ech_.reduce(v); }
    bool contains(const Subspace& o) const {
        for (auto& v : o.ech_.rows())
            if (!contains(v)) return false;
        return true;
    }
    const std::vector<SVec<S>>& basis() const {
        if (!cache_) cache_ = ech_.rref();
        return *cache_;
    }
    std::vector<int> pivots() const { return ech_.pivots(); }
    const Echelon<S>& echelon() const { return ech_; }

    friend Subspace sum(const Subspace& a, const Subspace& b) {
        Subspace s = a;
        for (auto& v : b.ech_.rows()) s.add(v);
        return s;
    }
    friend Subspace intersection(const Subspace& a, const Subspace& b) {
        int n = a.ambient();
        Echelon<S> z(2 * n);
        auto doubled = [n](const SVec<S>& v, bool twice) {
            SVec<S> w = v;
            if (twice)
                for (auto& [i, x] : v) w.emplace_back(i + n, x);
            return w;
        };
        for (auto& v : a.ech_.rows()) z.insert(doubled(v, true));
        for (auto& v : b.ech_.rows()) z.insert(doubled(v, false));
        Subspace out(n);
        for (auto& r : z.rows()) {
            if (r.front().first < n) continue;
            SVec<S> w;
            for (auto& [i, x] : r) w.emplace_back(i - n, x);
            out.add(w);
        }
        return out;
    }
    friend int quotient_dim(const Subspace& a, const Subspace& b) {
        if (!a.contains(b)) throw DomainError("NotContained", "quotient_dim requires b inside a");
        return a.dim() - b.dim();
    }

private:
    Echelon<S> ech_;
    mutable std::optional<std::vector<SVec<S>>> cache_;
};

}  // namespace opcoh
