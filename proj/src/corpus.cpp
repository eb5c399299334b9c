#include "langprop/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace langprop {

namespace {

std::string line_context(std::string_view source, std::size_t line_no) {
  std::ostringstream os;
  os << source << ":" << line_no << ": ";
  return os.str();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

Lang parse_code_or_throw(std::string_view code, std::string_view context) {
  auto lang = lang_from_code(code);
  if (!lang) {
    throw ParseError(std::string(context) + "unknown language code '" +
                     std::string(code) + "'");
  }
  return *lang;
}

}  // namespace

GoldLabel GoldLabel::single(Lang lang) {
  return GoldLabel(Kind::Single, {lang});
}

GoldLabel GoldLabel::ambiguous(std::vector<Lang> members) {
  std::sort(members.begin(), members.end());
  if (members.size() < 2 ||
      std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ValidationError("ambiguous gold label needs >=2 distinct languages");
  }
  return GoldLabel(Kind::Ambiguous, std::move(members));
}

GoldLabel GoldLabel::undecided() {
  return GoldLabel(Kind::Undecided, {});
}

bool GoldLabel::contains(Lang lang) const {
  return std::find(members_.begin(), members_.end(), lang) != members_.end();
}

std::optional<GoldLabel> parse_gold_field(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field == "und") return GoldLabel::undecided();
  if (field.find('/') == std::string_view::npos) {
    return GoldLabel::single(parse_code_or_throw(field, ""));
  }
  std::vector<Lang> members;
  std::size_t start = 0;
  while (start <= field.size()) {
    std::size_t slash = field.find('/', start);
    std::string_view part = slash == std::string_view::npos
                                ? field.substr(start)
                                : field.substr(start, slash - start);
    if (part.empty()) throw ParseError("empty code in label set '" + std::string(field) + "'");
    members.push_back(parse_code_or_throw(part, ""));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  std::vector<Lang> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParseError("duplicate code in label set '" + std::string(field) + "'");
  }
  return GoldLabel::ambiguous(std::move(members));
}

std::string format_gold(const GoldLabel& gold) {
  switch (gold.kind()) {
    case GoldLabel::Kind::Undecided:
      return "und";
    case GoldLabel::Kind::Single:
      return std::string(to_code(gold.members()[0]));
    case GoldLabel::Kind::Ambiguous: {
      std::string out;
      for (Lang lang : gold.members()) {
        if (!out.empty()) out += '/';
        out += to_code(lang);
      }
      return out;
    }
  }
  return {};
}

std::vector<Tweet> parse_tweets(std::istream& in, std::string_view source) {
  std::vector<Tweet> tweets;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string context = line_context(source, line_no);
    auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw ParseError(context + "expected 4 tab-separated fields, found " +
                       std::to_string(fields.size()));
    }
    Tweet tweet;
    tweet.id = std::string(fields[0]);
    tweet.author = std::string(fields[1]);
    tweet.text = std::string(fields[3]);
    if (tweet.id.empty()) throw ParseError(context + "empty tweet id");
    if (tweet.author.empty()) throw ParseError(context + "empty author");
    if (!seen_ids.insert(tweet.id).second) {
      throw ParseError(context + "duplicate tweet id '" + tweet.id + "'");
    }
    try {
      tweet.gold = parse_gold_field(fields[2]);
    } catch (const ParseError& e) {
      throw ParseError(context + e.what());
    }
    tweets.push_back(std::move(tweet));
  }
  return tweets;
}

std::vector<Tweet> load_tweets(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open tweets file '" + path + "'");
  return parse_tweets(in, path);
}

void write_tweets(std::ostream& out, const std::vector<Tweet>& tweets) {
  for (const Tweet& t : tweets) {
    out << t.id << '\t' << t.author << '\t'
        << (t.gold ? format_gold(*t.gold) : std::string()) << '\t' << t.text
        << '\n';
  }
}

void write_tweets_file(const std::string& path, const std::vector<Tweet>& tweets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write tweets file '" + path + "'");
  write_tweets(out, tweets);
}

std::vector<UserPair> parse_follows(std::istream& in, std::string_view source,
                                    std::size_t* skipped_self_loops) {
  std::set<UserPair> pairs;
  std::size_t skipped = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string context = line_context(source, line_no);
    auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw ParseError(context + "expected 2 tab-separated fields, found " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(context + "empty user id");
    }
    if (fields[0] == fields[1]) {
      ++skipped;
      continue;
    }
    std::string a(fields[0]);
    std::string b(fields[1]);
    if (b < a) std::swap(a, b);
    pairs.emplace(std::move(a), std::move(b));
  }
  if (skipped_self_loops) *skipped_self_loops = skipped;
  return {pairs.begin(), pairs.end()};
}

std::vector<UserPair> load_follows(const std::string& path,
                                   std::size_t* skipped_self_loops) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open follows file '" + path + "'");
  return parse_follows(in, path, skipped_self_loops);
}

void write_follows(std::ostream& out, const std::vector<UserPair>& follows) {
  for (const auto& [a, b] : follows) out << a << '\t' << b << '\n';
}

void write_follows_file(const std::string& path, const std::vector<UserPair>& follows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write follows file '" + path + "'");
  write_follows(out, follows);
}

Dataset merge_dataset(const std::vector<Tweet>& train, const std::vector<Tweet>& test,
                      std::vector<UserPair> follows) {
  Dataset data;
  data.tweets.reserve(train.size() + test.size());
  std::unordered_set<std::string> seen;
  for (const auto* split : {&train, &test}) {
    for (const Tweet& t : *split) {
      if (!seen.insert(t.id).second) {
        throw ValidationError("tweet id '" + t.id + "' appears in both splits");
      }
      data.tweets.push_back(t);
    }
  }
  for (UserPair& pair : follows) {
    if (pair.second < pair.first) std::swap(pair.first, pair.second);
  }
  std::sort(follows.begin(), follows.end());
  follows.erase(std::unique(follows.begin(), follows.end()), follows.end());
  data.follows = std::move(follows);
  return data;
}

LabelDistribution seed_distribution(const GoldLabel& gold) {
  switch (gold.kind()) {
    case GoldLabel::Kind::Single:
      return LabelDistribution::point_mass(gold.members()[0]);
    case GoldLabel::Kind::Ambiguous: {
      LabelDistribution dist;
      const double mass = 1.0 / static_cast<double>(gold.members().size());
      for (Lang lang : gold.members()) dist[lang] = mass;
      return dist;
    }
    case GoldLabel::Kind::Undecided:
      return LabelDistribution::uniform();
  }
  return LabelDistribution::uniform();
}

}  // namespace langprop
