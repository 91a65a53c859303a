#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "graphdim/error.hpp"
#include "graphdim/harness.hpp"

namespace graphdim {

MeanStd mean_std(const std::vector<double>& xs) {
  if (xs.empty()) throw InvalidInput("mean_std: empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

StabilityResult stability_search(const std::map<std::size_t, std::vector<double>>& per_k,
                                 std::size_t window, double cutoff) {
  if (window == 0) throw InvalidParameter("stability_search: window must be >= 1");
  if (window > per_k.size())
    throw InvalidParameter("stability_search: window " + std::to_string(window) +
                           " exceeds grid length " + std::to_string(per_k.size()));

  std::vector<std::size_t> ks;
  std::vector<const std::vector<double>*> lists;
  for (const auto& [k, xs] : per_k) {
    if (xs.empty()) continue;
    ks.push_back(k);
    lists.push_back(&xs);
  }
  if (ks.empty()) throw InvalidInput("stability_search: no estimates");
  const std::size_t w = std::min(window, ks.size());

  auto pooled = [&](std::size_t first, std::size_t last) {
    std::vector<double> all;
    for (std::size_t i = first; i <= last; ++i)
      all.insert(all.end(), lists[i]->begin(), lists[i]->end());
    return mean_std(all);
  };

  StabilityResult best;
  bool have = false;
  for (std::size_t start = 0; start + w <= ks.size(); ++start) {
    const MeanStd ms = pooled(start, start + w - 1);
    if (!have || ms.std < best.std) {
      best = {ks[start], ks[start + w - 1], ms.mean, ms.std, true};
      have = true;
    }
  }
  if (best.std > cutoff) {
    const MeanStd all = pooled(0, ks.size() - 1);
    best = {ks.front(), ks.back(), all.mean, all.std, false};
  }
  return best;
}

namespace {

std::size_t parse_size(std::string_view text, const std::string& whole) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidParameter("invalid K grid '" + whole + "'");
  return value;
}

}  // namespace

std::vector<std::size_t> parse_k_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  const std::string_view sv(text);
  if (sv.find(':') != std::string_view::npos) {
    const auto c1 = sv.find(':');
    const auto c2 = sv.find(':', c1 + 1);
    if (c2 == std::string_view::npos || sv.find(':', c2 + 1) != std::string_view::npos)
      throw InvalidParameter("K grid must look like start:stop:step, got '" + text + "'");
    const std::size_t start = parse_size(sv.substr(0, c1), text);
    const std::size_t stop = parse_size(sv.substr(c1 + 1, c2 - c1 - 1), text);
    const std::size_t step = parse_size(sv.substr(c2 + 1), text);
    if (step == 0) throw InvalidParameter("K grid step must be positive");
    if (stop < start) throw InvalidParameter("K grid stop is below start in '" + text + "'");
    for (std::size_t k = start; k <= stop; k += step) grid.push_back(k);
  } else {
    std::size_t pos = 0;
    while (pos <= sv.size()) {
      const auto comma = sv.find(',', pos);
      const auto end = comma == std::string_view::npos ? sv.size() : comma;
      grid.push_back(parse_size(sv.substr(pos, end - pos), text));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0) throw InvalidParameter("K grid values must be positive");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw InvalidParameter("K grid must be strictly ascending: '" + text + "'");
  }
  return grid;
}

}  // namespace graphdim
