#include "milnor/magnus.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "milnor/detail_text.hpp"
#include "milnor/errors.hpp"
#include "milnor/random.hpp"

namespace milnor {

TruncatedSeries::TruncatedSeries(int letters, int degree) : letters_(letters), degree_(degree) {
  if (letters < 1 || degree < 0) throw std::invalid_argument("bad series shape");
  std::size_t block = 1;
  offsets_.push_back(0);
  for (int n = 0; n <= degree; ++n) {
    offsets_.push_back(offsets_.back() + block);
    block *= letters;
  }
  coeffs_.assign(offsets_.back(), 0);
}

TruncatedSeries TruncatedSeries::one(int letters, int degree) {
  TruncatedSeries s(letters, degree);
  s.coeffs_[0] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::meridian(int letters, int degree, int letter) {
  TruncatedSeries s = one(letters, degree);
  if (degree >= 1) {
    const int w[] = {letter};
    s.set_coefficient(w, 1);
  }
  return s;
}

std::size_t TruncatedSeries::index(std::span<const int> word) const {
  std::size_t i = 0;
  for (const int letter : word) {
    if (letter < 0 || letter >= letters_) throw std::out_of_range("letter out of range");
    i = i * letters_ + letter;
  }
  return offset(static_cast<int>(word.size())) + i;
}

std::int64_t TruncatedSeries::coefficient(std::span<const int> word) const {
  if (static_cast<int>(word.size()) > degree_) return 0;
  return coeffs_[index(word)];
}

void TruncatedSeries::set_coefficient(std::span<const int> word, std::int64_t value) {
  if (static_cast<int>(word.size()) > degree_) throw std::out_of_range("word above truncation");
  coeffs_[index(word)] = value;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.letters_ != b.letters_ || a.degree_ != b.degree_)
    throw std::invalid_argument("series shapes differ");
  TruncatedSeries out(a.letters_, a.degree_);
  const int k = a.letters_;
  std::vector<std::size_t> blocks{1};
  for (int n = 1; n <= a.degree_; ++n) blocks.push_back(blocks.back() * k);
  for (int la = 0; la <= a.degree_; ++la) {
    for (int lb = 0; la + lb <= a.degree_; ++lb) {
      const std::size_t dst = out.offset(la + lb);
      for (std::size_t i = 0; i < blocks[la]; ++i) {
        const std::int64_t ca = a.coeffs_[a.offset(la) + i];
        if (ca == 0) continue;
        for (std::size_t j = 0; j < blocks[lb]; ++j)
          out.coeffs_[dst + i * blocks[lb] + j] += ca * b.coeffs_[b.offset(lb) + j];
      }
    }
  }
  return out;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries out = a;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_.at(i);
  return out;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries out = a;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] -= b.coeffs_.at(i);
  return out;
}

TruncatedSeries series_inv(const TruncatedSeries& a) {
  if (a.constant() != 1) throw std::domain_error("series inverse needs constant term 1");
  // a = 1 + x with x of positive order, so a^-1 = sum_n (-x)^n.
  const TruncatedSeries unit = TruncatedSeries::one(a.letters(), a.degree());
  const TruncatedSeries neg_x = unit - a;
  TruncatedSeries term = unit;
  TruncatedSeries sum = unit;
  for (int n = 1; n <= a.degree(); ++n) {
    term = series_mul(term, neg_x);
    sum = sum + term;
  }
  return sum;
}

TruncatedSeries series_pow(const TruncatedSeries& a, int exponent) {
  const TruncatedSeries base = exponent < 0 ? series_inv(a) : a;
  TruncatedSeries out = TruncatedSeries::one(a.letters(), a.degree());
  for (int n = 0; n < std::abs(exponent); ++n) out = series_mul(out, base);
  return out;
}

ArcState propagate(const LinkDiagram& diagram, int degree) {
  const int k = diagram.k;
  ArcState state;
  std::vector<std::vector<CrossingEvent>> under(k);
  for (int i = 0; i < k; ++i) {
    under[i] = diagram.undercrossings(i);
    state.arcs.emplace_back(under[i].size() + 1, TruncatedSeries::meridian(k, degree, i));
  }
  for (int sweep = 1; sweep <= degree + 2; ++sweep) {
    bool changed = false;
    for (int i = 0; i < k; ++i) {
      auto& arcs = state.arcs[i];
      for (std::size_t c = 0; c < under[i].size(); ++c) {
        const auto& e = under[i][c];
        const auto& g = state.arcs.at(e.over).at(e.over_arc);
        TruncatedSeries next =
            series_mul(series_mul(series_pow(g, -e.sign), arcs[c]), series_pow(g, e.sign));
        if (!(next == arcs[c + 1])) {
          arcs[c + 1] = std::move(next);
          changed = true;
        }
      }
    }
    state.sweeps = sweep;
    if (!changed) return state;
  }
  throw std::runtime_error("Wirtinger propagation did not stabilise; malformed diagram");
}

TruncatedSeries longitude(const ArcState& state, const LinkDiagram& diagram, int j) {
  if (j < 1 || j > diagram.k) throw InputError(detail::text("invalid strand ", j));
  const auto& shape = state.arcs.at(0).at(0);
  TruncatedSeries out = TruncatedSeries::one(shape.letters(), shape.degree());
  for (const auto& e : diagram.undercrossings(j - 1))
    out = series_mul(out, series_pow(state.arcs.at(e.over).at(e.over_arc), e.sign));
  return out;
}

MuIndices parse_mu_indices(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw InputError("mu indices need ';' as in 1,2;3");
  auto number = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 1)
      throw InputError("bad mu index '" + std::string(s) + "'");
    return v;
  };
  MuIndices out;
  std::string_view head = text.substr(0, semi);
  for (;;) {
    const auto comma = head.find(',');
    out.word.push_back(number(head.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    head.remove_prefix(comma + 1);
  }
  out.target = number(text.substr(semi + 1));
  if (std::find(out.word.begin(), out.word.end(), out.target) != out.word.end())
    throw InputError("mu target strand must differ from the word's strands");
  return out;
}

std::int64_t mu(const LinkDiagram& diagram, const MuIndices& indices, int degree) {
  if (static_cast<int>(indices.word.size()) > degree)
    throw InputError("truncation degree too low for this invariant");
  std::vector<int> word;
  for (const int i : indices.word) {
    if (i < 1 || i > diagram.k) throw InputError(detail::text("invalid strand ", i));
    word.push_back(i - 1);
  }
  const ArcState state = propagate(diagram, degree);
  return longitude(state, diagram, indices.target).coefficient(word);
}

LinkDiagram generic_projection(const StringLink& link, std::uint64_t seed, double max_tilt,
                               int max_attempts) {
  auto rng = make_rng(seed, "projection");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const Vec3 d = uniform_on_cap(rng, Vec3::UnitZ(), max_tilt);
    try {
      return project(link, d);
    } catch (const DegeneracyError&) {
    }
  }
  throw DegeneracyError("no generic projection direction found");
}

std::int64_t mu(const StringLink& link, const MuIndices& indices, const MagnusOptions& options) {
  const LinkDiagram diagram =
      generic_projection(link, options.seed, options.max_tilt, options.max_attempts);
  return mu(diagram, indices, options.degree);
}

}  // namespace milnor
