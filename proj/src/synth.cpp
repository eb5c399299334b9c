#include "langprop/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>

namespace langprop {

void SynthConfig::validate() const {
  if (n_train < 1 || n_test < 1) throw ValidationError("need at least one tweet per split");
  if (overlap < 0.0 || overlap > 1.0) throw ValidationError("overlap must lie in [0, 1]");
  if (users < 2) throw ValidationError("need at least two users");
  if (monolinguality < 0.0 || monolinguality > 1.0) {
    throw ValidationError("monolinguality must lie in [0, 1]");
  }
  if (p_intra < 0.0 || p_intra > 1.0 || p_inter < 0.0 || p_inter > 1.0) {
    throw ValidationError("follow probabilities must lie in [0, 1]");
  }
  if (vocab_size < 2) throw ValidationError("vocab_size must be at least 2");
  if (words_min < 1 || words_max < words_min) {
    throw ValidationError("invalid words-per-tweet range");
  }
  if (word_len_min < 1 || word_len_max < word_len_min) {
    throw ValidationError("invalid word-length range");
  }
  if (lang_a == lang_b) throw ValidationError("the two languages must differ");
}

namespace {

// std::uniform_*_distribution output is implementation-defined, so byte-level
// determinism across platforms needs hand-rolled draws on top of mt19937_64.
int bounded_int(std::mt19937_64& rng, int lo, int hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % range);
}

double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool bernoulli(std::mt19937_64& rng, double p) { return unit_real(rng) < p; }

std::string random_word(std::mt19937_64& rng, int len_min, int len_max) {
  const int len = bounded_int(rng, len_min, len_max);
  std::string word(static_cast<std::size_t>(len), 'a');
  for (char& c : word) c = static_cast<char>('a' + bounded_int(rng, 0, 25));
  return word;
}

std::vector<std::string> draw_words(std::mt19937_64& rng, int count, int len_min,
                                    int len_max, std::set<std::string>& used) {
  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(words.size()) < count) {
    std::string word = random_word(rng, len_min, len_max);
    if (!used.insert(word).second) continue;
    words.push_back(std::move(word));
  }
  return words;
}

std::string format_id(const char* prefix, int width, int value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, value);
  return buf;
}

}  // namespace

SynthData generate_synth(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  const int shared_count = static_cast<int>(
      std::lround(cfg.overlap * static_cast<double>(cfg.vocab_size)));
  std::set<std::string> used;
  const std::vector<std::string> shared =
      draw_words(rng, shared_count, cfg.word_len_min, cfg.word_len_max, used);
  std::array<std::vector<std::string>, 2> vocab;
  for (auto& pool : vocab) {
    pool = shared;
    const std::vector<std::string> specific = draw_words(
        rng, cfg.vocab_size - shared_count, cfg.word_len_min, cfg.word_len_max, used);
    pool.insert(pool.end(), specific.begin(), specific.end());
  }

  // Users: first half community A, second half community B; each speaks its
  // community language with probability `monolinguality`.
  const std::array<Lang, 2> langs = {cfg.lang_a, cfg.lang_b};
  std::vector<std::string> user_ids;
  std::vector<int> user_lang;  // index into langs/vocab
  user_ids.reserve(static_cast<std::size_t>(cfg.users));
  for (int u = 0; u < cfg.users; ++u) {
    user_ids.push_back(format_id("u", 4, u));
    const int community = u < cfg.users / 2 ? 0 : 1;
    user_lang.push_back(bernoulli(rng, cfg.monolinguality) ? community : 1 - community);
  }

  SynthData data;
  for (int i = 0; i < cfg.users; ++i) {
    for (int j = i + 1; j < cfg.users; ++j) {
      const bool same = (i < cfg.users / 2) == (j < cfg.users / 2);
      if (bernoulli(rng, same ? cfg.p_intra : cfg.p_inter)) {
        data.follows.emplace_back(user_ids[static_cast<std::size_t>(i)],
                                  user_ids[static_cast<std::size_t>(j)]);
      }
    }
  }

  const int total = cfg.n_train + cfg.n_test;
  for (int t = 0; t < total; ++t) {
    const int author = bounded_int(rng, 0, cfg.users - 1);
    const int lang = user_lang[static_cast<std::size_t>(author)];
    const auto& pool = vocab[static_cast<std::size_t>(lang)];
    const int n_words = bounded_int(rng, cfg.words_min, cfg.words_max);
    std::string text;
    for (int w = 0; w < n_words; ++w) {
      if (w != 0) text += ' ';
      text += pool[static_cast<std::size_t>(
          bounded_int(rng, 0, static_cast<int>(pool.size()) - 1))];
    }
    Tweet tweet{format_id("t", 6, t), user_ids[static_cast<std::size_t>(author)],
                std::move(text), GoldLabel::single(langs[static_cast<std::size_t>(lang)])};
    (t < cfg.n_train ? data.train : data.test).push_back(std::move(tweet));
  }
  return data;
}

}  // namespace langprop
