#include "oracles.hpp"

#include <cmath>
#include <set>

namespace oracle {

double zscore_value(const std::vector<double>& v, std::size_t i) {
  double mu = 0.0;
  for (double x : v) mu += x;
  mu /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mu) * (x - mu);
  var /= static_cast<double>(v.size());
  return (v[i] - mu) / std::sqrt(var);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sx += a[i];
    sy += b[i];
    sxx += static_cast<long double>(a[i]) * a[i];
    syy += static_cast<long double>(b[i]) * b[i];
    sxy += static_cast<long double>(a[i]) * b[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

std::vector<double> counting_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double smaller = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) smaller += 1;
      if (j != i && v[j] == v[i]) equal += 1;
    }
    r[i] = 1.0 + smaller + 0.5 * equal;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(counting_ranks(a), counting_ranks(b));
}

Matrix u_center_literal(const Matrix& a) {
  const auto n = a.rows();
  auto at = [&](dds::Index i, dds::Index j) { return i == j ? 0.0 : a(i, j); };
  Matrix out(n, n);
  for (dds::Index i = 0; i < n; ++i) {
    for (dds::Index j = 0; j < n; ++j) {
      if (i == j) {
        out(i, j) = 0.0;
        continue;
      }
      double row = 0, col = 0, all = 0;
      for (dds::Index l = 0; l < n; ++l) row += at(i, l);
      for (dds::Index k = 0; k < n; ++k) col += at(k, j);
      for (dds::Index k = 0; k < n; ++k)
        for (dds::Index l = 0; l < n; ++l) all += at(k, l);
      const double nd = static_cast<double>(n);
      out(i, j) = at(i, j) - row / (nd - 2) - col / (nd - 2) + all / ((nd - 1) * (nd - 2));
    }
  }
  return out;
}

Matrix double_center_product(const Matrix& m) {
  const auto n = m.rows();
  Matrix h = Matrix::Identity(n, n);
  for (dds::Index i = 0; i < n; ++i)
    for (dds::Index j = 0; j < n; ++j) h(i, j) -= 1.0 / static_cast<double>(n);
  return h * m * h;
}

namespace {

std::vector<double> row_of(const RowMatrix& x, dds::Index i) {
  return std::vector<double>(x.row(i).data(), x.row(i).data() + x.cols());
}

RowMatrix center_columns(RowMatrix x) {
  for (dds::Index j = 0; j < x.cols(); ++j) {
    double mu = 0;
    for (dds::Index i = 0; i < x.rows(); ++i) mu += x(i, j);
    mu /= static_cast<double>(x.rows());
    for (dds::Index i = 0; i < x.rows(); ++i) x(i, j) -= mu;
  }
  return x;
}

std::vector<double> rdm_upper(const RowMatrix& x) {
  std::vector<double> out;
  for (dds::Index i = 0; i < x.rows(); ++i)
    for (dds::Index j = i + 1; j < x.rows(); ++j) out.push_back(1.0 - pearson(row_of(x, i), row_of(x, j)));
  return out;
}

RowMatrix zscore_columns(const RowMatrix& x) {
  RowMatrix out(x.rows(), x.cols());
  for (dds::Index j = 0; j < x.cols(); ++j) {
    std::vector<double> col(static_cast<std::size_t>(x.rows()));
    for (dds::Index i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
    for (dds::Index i = 0; i < x.rows(); ++i) out(i, j) = zscore_value(col, static_cast<std::size_t>(i));
  }
  return out;
}

Matrix cosine_rdm(const RowMatrix& x) {
  Matrix m(x.rows(), x.rows());
  for (dds::Index i = 0; i < x.rows(); ++i) {
    for (dds::Index j = 0; j < x.rows(); ++j) {
      double dot = 0, ni = 0, nj = 0;
      for (dds::Index k = 0; k < x.cols(); ++k) {
        dot += x(i, k) * x(j, k);
        ni += x(i, k) * x(i, k);
        nj += x(j, k) * x(j, k);
      }
      m(i, j) = 1.0 - dot / (std::sqrt(ni) * std::sqrt(nj));
    }
  }
  return m;
}

std::vector<double> off_diagonal(const Matrix& m) {
  std::vector<double> v;
  for (dds::Index i = 0; i < m.rows(); ++i)
    for (dds::Index j = 0; j < m.cols(); ++j)
      if (i != j) v.push_back(m(i, j));
  return v;
}

}  // namespace

double rsa_textbook(const RowMatrix& x, const RowMatrix& y) {
  return spearman(rdm_upper(center_columns(x)), rdm_upper(center_columns(y)));
}

double dds_zscore_cosine_unbiased(const RowMatrix& x, const RowMatrix& y) {
  const Matrix mx = u_center_literal(cosine_rdm(zscore_columns(x)));
  const Matrix my = u_center_literal(cosine_rdm(zscore_columns(y)));
  return pearson(off_diagonal(mx), off_diagonal(my));
}

int topk_overlap(const std::vector<double>& aff, const std::vector<double>& gt, int k, int reference) {
  auto top = [](std::vector<double> v, int count) {
    std::set<std::size_t> picked;
    for (int c = 0; c < count; ++c) {
      std::size_t best = v.size();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (picked.count(i)) continue;
        if (best == v.size() || v[i] > v[best]) best = i;
      }
      picked.insert(best);
    }
    return picked;
  };
  const auto a = top(aff, k);
  const auto g = top(gt, reference);
  int hits = 0;
  for (auto i : a) hits += static_cast<int>(g.count(i));
  return hits;
}

}  // namespace oracle
