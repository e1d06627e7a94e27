#include "confdim/symbolic.hpp"

#include <algorithm>
#include <cmath>

#include "confdim/error.hpp"

namespace confdim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::EmptyWord: return "empty-word";
    case ErrorCode::Inadmissible: return "inadmissible-word";
    case ErrorCode::Reducible: return "reducible-incidence";
    case ErrorCode::IterationLimit: return "iteration-limit";
    case ErrorCode::DegenerateSystem: return "degenerate-system";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::UnknownName: return "unknown-name";
    case ErrorCode::EmptyAdmissibleSet: return "empty-admissible-set";
  }
  return "unknown";
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, symbols_.size());
  return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::suffix_from(std::size_t pos) const {
  pos = std::min(pos, symbols_.size());
  return Word(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(pos), symbols_.end()));
}

Word Word::appended(Symbol s) const {
  auto v = symbols_;
  v.push_back(s);
  return Word(std::move(v));
}

Word Word::prepended(Symbol s) const {
  std::vector<Symbol> v;
  v.reserve(symbols_.size() + 1);
  v.push_back(s);
  v.insert(v.end(), symbols_.begin(), symbols_.end());
  return Word(std::move(v));
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(symbols_[i]);
  }
  return out;
}

Word Word::parse(std::string_view text) {
  std::vector<Symbol> v;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find('.', i);
    if (j == std::string_view::npos) j = text.size();
    std::string part(text.substr(i, j - i));
    if (part.empty()) fail(ErrorCode::InvalidArgument, "malformed word '" + std::string(text) + "'");
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(part, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "malformed word '" + std::string(text) + "'");
    }
    if (used != part.size()) fail(ErrorCode::InvalidArgument, "malformed word '" + std::string(text) + "'");
    v.push_back(static_cast<Symbol>(value));
    i = j + 1;
  }
  return Word(std::move(v));
}

IncidenceMatrix::IncidenceMatrix(std::vector<std::vector<int>> rows) : n_(rows.size()) {
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) fail(ErrorCode::InvalidArgument, "incidence matrix must be square");
    for (int v : row) {
      if (v != 0 && v != 1) fail(ErrorCode::InvalidArgument, "incidence entries must be 0 or 1");
      entries_.push_back(static_cast<std::uint8_t>(v));
    }
  }
}

IncidenceMatrix IncidenceMatrix::full(std::size_t n) {
  IncidenceMatrix m;
  m.n_ = n;
  m.entries_.assign(n * n, 1);
  return m;
}

bool IncidenceMatrix::is_full() const {
  return std::all_of(entries_.begin(), entries_.end(), [](std::uint8_t v) { return v != 0; });
}

IncidenceMatrix IncidenceMatrix::restricted(std::size_t n) const {
  if (n > n_) fail(ErrorCode::InvalidArgument, "restriction larger than matrix");
  IncidenceMatrix m;
  m.n_ = n;
  m.entries_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.entries_[i * n + j] = entries_[i * n_ + j];
  return m;
}

IncidenceMatrix IncidenceMatrix::boolean_power(std::size_t p) const {
  if (p == 0) fail(ErrorCode::InvalidArgument, "boolean_power needs p >= 1");
  IncidenceMatrix result = *this;
  for (std::size_t step = 1; step < p; ++step) {
    IncidenceMatrix next;
    next.n_ = n_;
    next.entries_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        if (!result.entries_[i * n_ + k]) continue;
        for (std::size_t j = 0; j < n_; ++j)
          if (entries_[k * n_ + j]) next.entries_[i * n_ + j] = 1;
      }
    result = std::move(next);
  }
  return result;
}

bool IncidenceMatrix::all_positive() const { return n_ > 0 && is_full(); }

std::vector<double> IncidenceMatrix::real_power(std::size_t p) const {
  std::vector<double> result(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) result[i * n_ + i] = 1.0;
  for (std::size_t step = 0; step < p; ++step) {
    std::vector<double> next(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const double r = result[i * n_ + k];
        if (r == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j)
          if (entries_[k * n_ + j]) next[i * n_ + j] += r;
      }
    result = std::move(next);
  }
  return result;
}

AdmissibleWords::AdmissibleWords(std::optional<IncidenceMatrix> matrix, std::size_t alphabet_size,
                                 std::size_t depth)
    : matrix_(std::move(matrix)), alphabet_(alphabet_size), depth_(depth) {
  if (depth == 0) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  if (alphabet_size == 0) fail(ErrorCode::InvalidArgument, "alphabet size must be >= 1");
  if (matrix_ && matrix_->size() != alphabet_size)
    fail(ErrorCode::InvalidArgument, "incidence matrix size does not match alphabet size");
}

AdmissibleWords::iterator::iterator(const AdmissibleWords* owner, bool done)
    : owner_(owner), done_(done) {
  if (done_) return;
  digits_.assign(owner_->depth_, 0);
  done_ = !fill_from(0);
  if (!done_) current_ = Word(digits_);
}

// Depth-first search for the lexicographically next admissible word whose
// digits before `position` are unchanged and digits_[position] >= its current value.
bool AdmissibleWords::iterator::fill_from(std::size_t position) {
  const std::size_t depth = owner_->depth_;
  const std::size_t alphabet = owner_->alphabet_;
  std::size_t pos = position;
  Symbol candidate = digits_[pos];
  while (true) {
    if (pos == depth) return true;
    Symbol s = candidate;
    while (s < alphabet && pos > 0 && !owner_->allowed(digits_[pos - 1], s)) ++s;
    if (s < alphabet) {
      digits_[pos] = s;
      ++pos;
      candidate = 0;
      continue;
    }
    if (pos == 0) return false;
    --pos;
    candidate = digits_[pos] + 1;
  }
}

bool AdmissibleWords::iterator::advance(std::size_t from_position) {
  digits_[from_position] += 1;
  return fill_from(from_position);
}

AdmissibleWords::iterator& AdmissibleWords::iterator::operator++() {
  if (done_) return *this;
  done_ = !advance(owner_->depth_ - 1);
  if (!done_) current_ = Word(digits_);
  return *this;
}

AdmissibleWords enumerate_admissible(const std::optional<IncidenceMatrix>& matrix,
                                     std::size_t alphabet_size, std::size_t depth) {
  if (alphabet_size < 2) fail(ErrorCode::InvalidArgument, "alphabet size must be >= 2");
  return AdmissibleWords(matrix, alphabet_size, depth);
}

bool is_admissible(const Word& word, const std::optional<IncidenceMatrix>& matrix,
                   std::size_t alphabet_size) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= alphabet_size) return false;
    if (i > 0 && matrix && !matrix->allows(word[i - 1], word[i])) return false;
  }
  return true;
}

Word shift(const Word& word) {
  if (word.size() < 2) fail(ErrorCode::EmptyWord, "shift of a word of length < 2 is empty");
  return word.suffix_from(1);
}

double comparison_distance(const Word& a, const Word& b) {
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i)
    if (a[i] != b[i]) return std::exp(-static_cast<double>(i));  // k = i + 1
  if (a.size() == b.size()) return 0.0;
  return std::exp(-static_cast<double>(common));  // k = common + 1
}

namespace {

// Greedy lexicographic search for a connector of exact length p from `from`
// to `to`, guided by reachability: reach[r] is A^r as a boolean matrix.
Word smallest_connector(const IncidenceMatrix& a, const std::vector<IncidenceMatrix>& reach,
                        Symbol from, Symbol to, std::size_t p) {
  const std::size_t n = a.size();
  std::vector<Symbol> out;
  Symbol prev = from;
  for (std::size_t pos = 0; pos < p; ++pos) {
    const std::size_t remaining = p - pos;  // steps from candidate to `to`
    for (Symbol s = 0; s < n; ++s) {
      if (!a.allows(prev, s)) continue;
      if (!reach[remaining].allows(s, to)) continue;
      out.push_back(s);
      prev = s;
      break;
    }
  }
  return Word(std::move(out));
}

}  // namespace

std::optional<PrimitivityWitness> finitely_primitive_witness(const IncidenceMatrix& matrix,
                                                             std::size_t max_length) {
  if (max_length == 0) fail(ErrorCode::InvalidArgument, "max_length must be >= 1");
  const std::size_t n = matrix.size();
  if (n == 0) return std::nullopt;

  // reach[r] = A^r as a boolean matrix, r >= 1
  std::vector<IncidenceMatrix> reach{IncidenceMatrix::full(n), matrix};
  for (std::size_t p = 1; p <= max_length; ++p) {
    reach.push_back(matrix.boolean_power(p + 1));
    if (!reach[p + 1].all_positive()) continue;

    PrimitivityWitness w;
    w.length = p;
    for (Symbol e = 0; e < n; ++e)
      for (Symbol f = 0; f < n; ++f) w.connectors[{e, f}] = smallest_connector(matrix, reach, e, f, p);
    return w;
  }
  return std::nullopt;
}

}  // namespace confdim
