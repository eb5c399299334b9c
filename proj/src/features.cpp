#include "langprop/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace langprop {

double SparseVector::dot(const SparseVector& other) const {
  double sum = 0.0;
  auto a = entries.begin();
  auto b = other.entries.begin();
  while (a != entries.end() && b != other.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

double SparseVector::squared_norm() const {
  double sum = 0.0;
  for (const auto& [idx, w] : entries) sum += w * w;
  return sum;
}

double SparseVector::norm() const { return std::sqrt(squared_norm()); }

namespace {

// Decodes one UTF-8 code point starting at `pos`; an invalid byte counts as
// a single one-byte character.
std::uint32_t next_codepoint(std::string_view text, std::size_t pos, std::size_t* length) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char first = byte(pos);
  std::size_t want = 0;
  std::uint32_t cp = 0;
  if (first < 0x80) {
    *length = 1;
    return first;
  } else if ((first & 0xE0) == 0xC0) {
    want = 1;
    cp = first & 0x1F;
  } else if ((first & 0xF0) == 0xE0) {
    want = 2;
    cp = first & 0x0F;
  } else if ((first & 0xF8) == 0xF0) {
    want = 3;
    cp = first & 0x07;
  } else {
    *length = 1;
    return first;
  }
  for (std::size_t i = 1; i <= want; ++i) {
    if (pos + i >= text.size() || (byte(pos + i) & 0xC0) != 0x80) {
      *length = 1;
      return first;
    }
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  *length = want + 1;
  return cp;
}

bool is_unicode_space(std::uint32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Byte offsets of the code points of each whitespace-free word. Each entry
// holds the offsets of every code point start plus the end offset.
std::vector<std::vector<std::size_t>> word_codepoint_offsets(std::string_view text) {
  std::vector<std::vector<std::size_t>> words;
  std::vector<std::size_t> current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 0;
    const std::uint32_t cp = next_codepoint(text, pos, &len);
    if (is_unicode_space(cp)) {
      if (!current.empty()) {
        current.push_back(pos);
        words.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(pos);
    }
    pos += len;
  }
  if (!current.empty()) {
    current.push_back(pos);
    words.push_back(std::move(current));
  }
  return words;
}

}  // namespace

std::vector<std::string> char_ngrams(std::string_view text, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) {
    throw ValidationError("char_ngrams requires 1 <= n_min <= n_max");
  }
  std::vector<std::string> grams;
  for (const auto& offsets : word_codepoint_offsets(text)) {
    const std::size_t chars = offsets.size() - 1;
    for (int n = n_min; n <= n_max; ++n) {
      if (chars < static_cast<std::size_t>(n)) break;
      for (std::size_t i = 0; i + n <= chars; ++i) {
        grams.emplace_back(text.substr(offsets[i], offsets[i + n] - offsets[i]));
      }
    }
  }
  return grams;
}

std::vector<std::string> word_unigrams(std::string_view text) {
  std::vector<std::string> words;
  for (const auto& offsets : word_codepoint_offsets(text)) {
    words.emplace_back(
        text.substr(offsets.front(), offsets.back() - offsets.front()));
  }
  return words;
}

FeatureSpace FeatureSpace::build(const std::vector<std::vector<std::string>>& corpus,
                                 int min_df) {
  if (corpus.empty()) throw ValidationError("feature space needs a non-empty corpus");
  if (min_df < 1) throw ValidationError("min_df must be >= 1");

  std::vector<std::string> first_seen;
  std::unordered_map<std::string, int> doc_freq;
  std::unordered_set<std::string_view> in_doc;
  for (const auto& doc : corpus) {
    in_doc.clear();
    for (const auto& feature : doc) {
      auto [it, inserted] = doc_freq.try_emplace(feature, 0);
      if (inserted) first_seen.push_back(feature);
      if (in_doc.insert(it->first).second) ++it->second;
    }
  }

  FeatureSpace space;
  for (auto& feature : first_seen) {
    if (doc_freq[feature] < min_df) continue;
    const auto index = static_cast<std::uint32_t>(space.features_.size());
    space.index_.emplace(feature, index);
    space.features_.push_back(std::move(feature));
  }
  if (space.features_.empty()) {
    throw ValidationError("feature space is empty after min_df filtering");
  }
  return space;
}

std::optional<std::uint32_t> FeatureSpace::index_of(std::string_view feature) const {
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string escape_feature(std::string_view feature) {
  std::string out;
  out.reserve(feature.size());
  for (char c : feature) {
    switch (c) {
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\\':
        out += "\\\\";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string unescape_feature(std::string_view text, std::string_view context) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 >= text.size()) throw ParseError(std::string(context) + "dangling escape");
    ++i;
    switch (text[i]) {
      case 't':
        out += '\t';
        break;
      case 'n':
        out += '\n';
        break;
      case '\\':
        out += '\\';
        break;
      default:
        throw ParseError(std::string(context) + "unknown escape '\\" +
                         std::string(1, text[i]) + "'");
    }
  }
  return out;
}

}  // namespace

void FeatureSpace::save(std::ostream& out) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    out << escape_feature(features_[i]) << '\t' << i << '\n';
  }
}

FeatureSpace FeatureSpace::load(std::istream& in, std::string_view source) {
  FeatureSpace space;
  std::vector<std::pair<std::uint32_t, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string context =
        std::string(source) + ":" + std::to_string(line_no) + ": ";
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError(context + "missing tab");
    std::uint32_t index = 0;
    const char* begin = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(begin, end, index);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(context + "bad feature index");
    }
    rows.emplace_back(index, unescape_feature(std::string_view(line).substr(0, tab), context));
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != i) {
      throw ParseError(std::string(source) + ": feature indices are not contiguous");
    }
    if (!space.index_.emplace(rows[i].second, rows[i].first).second) {
      throw ParseError(std::string(source) + ": duplicate feature '" + rows[i].second + "'");
    }
    space.features_.push_back(std::move(rows[i].second));
  }
  if (space.features_.empty()) throw ParseError(std::string(source) + ": empty feature space");
  return space;
}

void FeatureSpace::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write feature space file '" + path + "'");
  save(out);
}

FeatureSpace FeatureSpace::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open feature space file '" + path + "'");
  return load(in, path);
}

SparseVector vectorize(const std::vector<std::string>& features, const FeatureSpace& space) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& feature : features) {
    if (auto index = space.index_of(feature)) counts[*index] += 1.0;
  }
  SparseVector vec;
  vec.entries.assign(counts.begin(), counts.end());
  std::sort(vec.entries.begin(), vec.entries.end());
  return vec;
}

}  // namespace langprop
