#pragma once

#include <bitset>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <vector>

namespace materna {

/// Small value-type set over a dense enum whose last enumerator is `kCount`-1.
template <typename E, std::size_t N>
class EnumSet {
  static_assert(std::is_enum_v<E>);

 public:
  constexpr EnumSet() = default;
  EnumSet(std::initializer_list<E> items) {
    for (E e : items) insert(e);
  }

  void insert(E e) { bits_.set(index(e)); }
  void erase(E e) { bits_.reset(index(e)); }
  bool contains(E e) const { return bits_.test(index(e)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  /// Members in enumerator order.
  std::vector<E> items() const {
    std::vector<E> out;
    for (std::size_t i = 0; i < N; ++i)
      if (bits_.test(i)) out.push_back(static_cast<E>(i));
    return out;
  }

  friend bool operator==(const EnumSet&, const EnumSet&) = default;

 private:
  static std::size_t index(E e) { return static_cast<std::size_t>(e); }
  std::bitset<N> bits_;
};

}  // namespace materna
