#include "w6j/factorial.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <shared_mutex>

namespace w6j {

namespace {

std::atomic<long> g_cap{600};
std::shared_mutex g_mutex;
// deque: growth never relocates existing elements, so returned references
// stay valid while other threads extend the cache.
std::deque<Integer> g_table;

}  // namespace

long factorial_cap() { return g_cap.load(); }

void set_factorial_cap(long cap) {
  if (cap < 0) throw DomainError("factorial cap must be nonnegative");
  g_cap.store(cap);
}

const Integer& factorial(long n) {
  if (n < 0) throw DomainError("factorial of negative integer " + std::to_string(n));
  if (n > g_cap.load())
    throw ResourceLimit("factorial argument " + std::to_string(n) + " exceeds cache cap " +
                        std::to_string(g_cap.load()));
  {
    std::shared_lock lock(g_mutex);
    if (static_cast<size_t>(n) < g_table.size()) return g_table[n];
  }
  std::unique_lock lock(g_mutex);
  if (g_table.empty()) g_table.emplace_back(1);
  while (g_table.size() <= static_cast<size_t>(n)) {
    g_table.emplace_back(g_table.back() * static_cast<long>(g_table.size()));
  }
  return g_table[n];
}

}  // namespace w6j
