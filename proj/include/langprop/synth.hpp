#pragma once

#include <cstdint>
#include <vector>

#include "langprop/corpus.hpp"
#include "langprop/errors.hpp"
#include "langprop/labels.hpp"

namespace langprop {

/// Settings for the synthetic two-language benchmark: two user communities
/// with homophilous follow edges, per-user language loyalty, and vocabularies
/// sharing a configurable fraction of words.
struct SynthConfig {
  std::uint64_t seed = 1;
  int n_train = 400;
  int n_test = 400;
  double overlap = 0.5;         // shared fraction of each language's vocabulary
  int users = 100;              // split into two equal communities
  double monolinguality = 0.9;  // P(user speaks its community language)
  double p_intra = 0.2;         // follow probability within a community
  double p_inter = 0.02;        // follow probability across communities
  int vocab_size = 200;         // words per language (shared + specific)
  int words_min = 5;
  int words_max = 12;
  int word_len_min = 4;
  int word_len_max = 8;
  Lang lang_a = Lang::Es;
  Lang lang_b = Lang::Pt;

  void validate() const;
};

struct SynthData {
  std::vector<Tweet> train;
  std::vector<Tweet> test;
  std::vector<UserPair> follows;
};

/// Deterministic for a fixed config (identical bytes after serialization).
SynthData generate_synth(const SynthConfig& cfg);

}  // namespace langprop
