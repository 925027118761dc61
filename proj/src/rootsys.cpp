#include "kop/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kop
{

char family_letter(Family f)
{
  return "ABCDEFG"[static_cast<int>(f)];
}

LieAlgebraSpec LieAlgebraSpec::parse(const std::string& text)
{
  LieAlgebraSpec spec;
  std::string token;
  auto flush = [&]() {
    if (token.empty())
      throw std::invalid_argument("empty simple component in '" + text + "'");
    char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
    if (letter < 'A' || letter > 'G' || token.size() < 2)
      throw std::invalid_argument("bad simple component '" + token + "'");
    int rank = 0;
    for (std::size_t i = 1; i < token.size(); ++i)
    {
      if (!std::isdigit(static_cast<unsigned char>(token[i])))
        throw std::invalid_argument("bad simple component '" + token + "'");
      rank = rank * 10 + (token[i] - '0');
    }
    spec.components.push_back({static_cast<Family>(letter - 'A'), rank});
    token.clear();
  };
  for (char c : text)
  {
    if (c == 'x' || c == 'X' || c == '*' || c == ',' || c == '+')
      flush();
    else if (!std::isspace(static_cast<unsigned char>(c)))
      token.push_back(c);
  }
  if (text.find_first_not_of(" \t") == std::string::npos)
    throw std::invalid_argument("Lie algebra name is empty");
  flush();
  spec.validate();
  return spec;
}

int LieAlgebraSpec::rank() const
{
  int n = 0;
  for (const auto& c : components)
    n += c.rank;
  return n;
}

std::string LieAlgebraSpec::str() const
{
  std::string s;
  for (std::size_t i = 0; i < components.size(); ++i)
  {
    if (i)
      s += "x";
    s += family_letter(components[i].family);
    s += std::to_string(components[i].rank);
  }
  return s;
}

void LieAlgebraSpec::validate() const
{
  if (components.empty())
    throw std::invalid_argument("Lie algebra has no components");
  for (const auto& c : components)
  {
    bool ok = false;
    switch (c.family)
    {
    case Family::A: ok = c.rank >= 1; break;
    case Family::B: ok = c.rank >= 2; break;
    case Family::C: ok = c.rank >= 2; break;
    case Family::D: ok = c.rank >= 4; break;
    case Family::E: ok = c.rank >= 6 && c.rank <= 8; break;
    case Family::F: ok = c.rank == 4; break;
    case Family::G: ok = c.rank == 2; break;
    }
    if (!ok)
      throw std::invalid_argument(std::string("unsupported simple type ") + family_letter(c.family) +
                                  std::to_string(c.rank));
  }
}

std::size_t expected_root_count(SimpleComponent c)
{
  const std::size_t r = static_cast<std::size_t>(c.rank);
  switch (c.family)
  {
  case Family::A: return r * (r + 1);
  case Family::B:
  case Family::C: return 2 * r * r;
  case Family::D: return 2 * r * (r - 1);
  case Family::E: return r == 6 ? 72 : (r == 7 ? 126 : 240);
  case Family::F: return 48;
  case Family::G: return 12;
  }
  return 0;
}

std::vector<std::vector<int>> cartan_matrix(SimpleComponent c)
{
  const int r = c.rank;
  std::vector<std::vector<int>> a(static_cast<std::size_t>(r), std::vector<int>(static_cast<std::size_t>(r), 0));
  auto link = [&](int i, int j, int aij = -1, int aji = -1) {
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aij;
    a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = aji;
  };
  for (int i = 0; i < r; ++i)
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 2;
  switch (c.family)
  {
  case Family::A:
    for (int i = 0; i + 1 < r; ++i)
      link(i, i + 1);
    break;
  case Family::B:
    for (int i = 0; i + 2 < r; ++i)
      link(i, i + 1);
    link(r - 2, r - 1, -2, -1);  // alpha_r short
    break;
  case Family::C:
    for (int i = 0; i + 2 < r; ++i)
      link(i, i + 1);
    link(r - 2, r - 1, -1, -2);  // alpha_r long
    break;
  case Family::D:
    for (int i = 0; i + 2 < r; ++i)
      link(i, i + 1);
    link(r - 3, r - 1);
    break;
  case Family::E:
    // 1-3-4-5-6(-7-8), 2 attached to 4
    link(0, 2);
    link(1, 3);
    for (int i = 2; i + 1 < r; ++i)
      link(i, i + 1);
    break;
  case Family::F:
    link(0, 1);
    link(1, 2, -2, -1);
    link(2, 3);
    break;
  case Family::G:
    link(0, 1, -1, -3);  // alpha_1 short
    break;
  }
  return a;
}

CartanVectorF to_float(const CartanVector& h)
{
  CartanVectorF r;
  r.values.reserve(h.values.size());
  for (const auto& v : h.values)
    r.values.push_back(v.to_double());
  return r;
}

CartanVector from_rationals(const std::vector<Rational>& values)
{
  CartanVector h;
  for (const auto& v : values)
    h.values.emplace_back(v);
  return h;
}

std::string to_string(const CartanVector& h)
{
  std::string s = "(";
  for (std::size_t i = 0; i < h.values.size(); ++i)
  {
    if (i)
      s += ", ";
    s += h.values[i].str();
  }
  return s + ")";
}

bool Root::is_positive() const
{
  for (int c : coords)
    if (c != 0)
      return c > 0;
  return false;
}

int Root::height() const
{
  int h = 0;
  for (int c : coords)
    h += c;
  return h;
}

Root Root::operator-() const
{
  Root r = *this;
  for (int& c : r.coords)
    c = -c;
  return r;
}

std::string Root::str() const
{
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < coords.size(); ++i)
    os << (i ? "," : "") << coords[i];
  os << "]";
  return os.str();
}

namespace
{

// Positive roots of one simple component, by the root-string algorithm:
// for a positive root beta and simple alpha_i, beta + alpha_i is a root iff
// q = p - <beta, alpha_i^vee> > 0 where p is the length of the downward string.
std::vector<std::vector<int>> positive_roots_of(SimpleComponent c)
{
  const auto a = cartan_matrix(c);
  const int r = c.rank;
  std::vector<std::vector<int>> roots;
  std::set<std::vector<int>> known;
  for (int i = 0; i < r; ++i)
  {
    std::vector<int> e(static_cast<std::size_t>(r), 0);
    e[static_cast<std::size_t>(i)] = 1;
    roots.push_back(e);
    known.insert(e);
  }
  for (std::size_t k = 0; k < roots.size(); ++k)
  {
    const std::vector<int> beta = roots[k];
    for (int i = 0; i < r; ++i)
    {
      int p = 0;
      std::vector<int> down = beta;
      while (true)
      {
        down[static_cast<std::size_t>(i)] -= 1;
        if (!known.count(down))
          break;
        ++p;
      }
      int pairing = 0;
      for (int j = 0; j < r; ++j)
        pairing += beta[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (p - pairing > 0)
      {
        std::vector<int> up = beta;
        up[static_cast<std::size_t>(i)] += 1;
        if (known.insert(up).second)
          roots.push_back(up);
      }
    }
  }
  return roots;
}

}  // namespace

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m)
{
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col)
  {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0)
      ++piv;
    if (piv == n)
      throw std::domain_error("singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = m[col][col];
    for (std::size_t j = 0; j < n; ++j)
    {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      if (i == col || m[i][col] == 0)
        continue;
      const Rational f = m[i][col];
      for (std::size_t j = 0; j < n; ++j)
      {
        m[i][j] -= f * m[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

RootSystem::RootSystem(LieAlgebraSpec spec) : spec_(std::move(spec))
{
  spec_.validate();
  rank_ = spec_.rank();
  std::vector<Root> positive;
  int offset = 0;
  for (std::size_t ci = 0; ci < spec_.components.size(); ++ci)
  {
    const auto comp = spec_.components[ci];
    offsets_.push_back(offset);
    auto local = positive_roots_of(comp);
    std::stable_sort(local.begin(), local.end(), [](const auto& x, const auto& y) {
      int hx = 0, hy = 0;
      for (int v : x)
        hx += v;
      for (int v : y)
        hy += v;
      if (hx != hy)
        return hx < hy;
      return x > y;
    });
    for (const auto& l : local)
    {
      Root root;
      root.coords.assign(static_cast<std::size_t>(rank_), 0);
      std::copy(l.begin(), l.end(), root.coords.begin() + offset);
      root.component = static_cast<int>(ci);
      positive.push_back(std::move(root));
    }
    for (int i = 0; i < comp.rank; ++i)
      component_of_simple_.push_back(static_cast<int>(ci));
    offset += comp.rank;
  }
  roots_ = positive;
  for (const auto& p : positive)
    roots_.push_back(-p);
  for (std::size_t i = 0; i < roots_.size(); ++i)
    index_.emplace(roots_[i].coords, i);
  simple_index_.assign(static_cast<std::size_t>(rank_), -1);
  for (std::size_t i = 0; i < positive.size(); ++i)
    if (positive[i].height() == 1)
      for (int j = 0; j < rank_; ++j)
        if (positive[i].coords[static_cast<std::size_t>(j)] == 1)
          simple_index_[static_cast<std::size_t>(j)] = static_cast<int>(i);

  gram_.assign(static_cast<std::size_t>(rank_), std::vector<long>(static_cast<std::size_t>(rank_), 0));
  for (const auto& b : roots_)
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j)
        gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
          static_cast<long>(b.coords[static_cast<std::size_t>(i)]) * b.coords[static_cast<std::size_t>(j)];

  std::vector<std::vector<Rational>> mq(static_cast<std::size_t>(rank_), std::vector<Rational>(static_cast<std::size_t>(rank_)));
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      mq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  gram_inverse_ = invert(std::move(mq));
}

std::vector<Root> RootSystem::positive_roots() const
{
  return {roots_.begin(), roots_.begin() + static_cast<std::ptrdiff_t>(roots_.size() / 2)};
}

std::optional<std::size_t> RootSystem::index_of(const std::vector<int>& coords) const
{
  auto it = index_.find(coords);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

CartanVector RootSystem::coroot_vector(const Root& alpha) const
{
  CartanVector h = CartanVector::zero(static_cast<std::size_t>(rank_));
  for (int i = 0; i < rank_; ++i)
  {
    Rational acc(0);
    for (int j = 0; j < rank_; ++j)
      if (alpha.coords[static_cast<std::size_t>(j)] != 0)
        acc += gram_inverse_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * alpha.coords[static_cast<std::size_t>(j)];
    h.values[static_cast<std::size_t>(i)] = Quadratic(acc);
  }
  return h;
}

Rational RootSystem::dual_inner(const Root& a, const Root& b) const
{
  return evaluate(a, coroot_vector(b)).as_rational();
}

RootSystem build_root_system(const LieAlgebraSpec& spec)
{
  return RootSystem(spec);
}

}  // namespace kop
