#pragma once

// Words over a finite (truncated) alphabet, incidence matrices, the shift,
// and the first-disagreement metric on symbol space.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace confdim {

using Symbol = std::uint32_t;

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Symbol> s) : symbols_(s) {}
  explicit Word(std::vector<Symbol> s) : symbols_(std::move(s)) {}

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  // First `n` symbols (n clipped to size()).
  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t pos) const;
  Word appended(Symbol s) const;
  Word prepended(Symbol s) const;

  // Dot-separated decimal symbols, e.g. "0.1.2".
  std::string to_string() const;
  static Word parse(std::string_view text);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.symbols_ <=> b.symbols_; }

 private:
  std::vector<Symbol> symbols_;
};

class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;
  explicit IncidenceMatrix(std::vector<std::vector<int>> rows);

  static IncidenceMatrix full(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool allows(Symbol from, Symbol to) const { return entries_[from * n_ + to] != 0; }
  bool is_full() const;

  // A restricted to its first n rows and columns.
  IncidenceMatrix restricted(std::size_t n) const;

  // Boolean power A^p (p >= 1).
  IncidenceMatrix boolean_power(std::size_t p) const;
  bool all_positive() const;

  // Real-valued power A^p as a dense row-major matrix of counts.
  std::vector<double> real_power(std::size_t p) const;

  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> entries_;
};

// Forward range over the admissible words of a fixed depth, produced in
// lexicographic order with O(depth) state.
class AdmissibleWords {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Word;
    using difference_type = std::ptrdiff_t;
    using pointer = const Word*;
    using reference = const Word&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

   private:
    friend class AdmissibleWords;
    iterator(const AdmissibleWords* owner, bool done);
    bool advance(std::size_t from_position);
    bool fill_from(std::size_t position);

    const AdmissibleWords* owner_ = nullptr;
    std::vector<Symbol> digits_;
    Word current_;
    bool done_ = true;
  };

  AdmissibleWords(std::optional<IncidenceMatrix> matrix, std::size_t alphabet_size,
                  std::size_t depth);

  iterator begin() const { return iterator(this, false); }
  iterator end() const { return iterator(this, true); }

  std::size_t alphabet_size() const noexcept { return alphabet_; }
  std::size_t depth() const noexcept { return depth_; }

 private:
  bool allowed(Symbol from, Symbol to) const { return !matrix_ || matrix_->allows(from, to); }

  std::optional<IncidenceMatrix> matrix_;
  std::size_t alphabet_;
  std::size_t depth_;
};

AdmissibleWords enumerate_admissible(const std::optional<IncidenceMatrix>& matrix,
                                     std::size_t alphabet_size, std::size_t depth);

bool is_admissible(const Word& word, const std::optional<IncidenceMatrix>& matrix,
                   std::size_t alphabet_size);

// Drops the first symbol. Throws EmptyWord for words shorter than two.
Word shift(const Word& word);

// e^{1-k} where k is the first (1-based) disagreement position, treating a
// proper prefix as disagreeing right after its end; 0 for identical words.
double comparison_distance(const Word& a, const Word& b);

struct PrimitivityWitness {
  std::size_t length = 0;
  // Lexicographically smallest connecting word for each ordered pair (e, e').
  std::map<std::pair<Symbol, Symbol>, Word> connectors;
};

// Smallest p <= max_length with every ordered pair joined by an admissible
// word of length p, or nullopt.
std::optional<PrimitivityWitness> finitely_primitive_witness(const IncidenceMatrix& matrix,
                                                             std::size_t max_length);

}  // namespace confdim
