#pragma once

// Italian consonant inventory with gemination behavior, used to check
// annotation legality. Labels are IPA written as UTF-8 text.

#include <array>
#include <optional>
#include <string_view>

namespace gemstop {

enum class GeminationBehavior { SingleAndGeminate, OnlyGeminate, NeverGeminate };

enum class Manner { Stop, Fricative, Affricate, Nasal, Lateral, Trill };

struct Consonant {
  std::string_view grapheme;
  std::string_view example_word;
  std::string_view ipa;
  std::string_view geminate_ipa;  // empty when the consonant never geminates
  GeminationBehavior behavior;
  Manner manner;
};

inline constexpr std::array<Consonant, 21> kItalianConsonants{{
    {"n", "nonna", "n", "nn", GeminationBehavior::SingleAndGeminate, Manner::Nasal},
    {"r", "ragazzi", "r", "rr", GeminationBehavior::SingleAndGeminate, Manner::Trill},
    {"t", "teoria", "t", "tt", GeminationBehavior::SingleAndGeminate, Manner::Stop},
    {"d", "digitale", "d", "dd", GeminationBehavior::SingleAndGeminate, Manner::Stop},
    {"l", "lavoro", "l", "ll", GeminationBehavior::SingleAndGeminate, Manner::Lateral},
    {"s", "sorelle", "s", "ss", GeminationBehavior::SingleAndGeminate, Manner::Fricative},
    {"c", "cugino", "k", "kk", GeminationBehavior::SingleAndGeminate, Manner::Stop},
    {"p", "parole", "p", "pp", GeminationBehavior::SingleAndGeminate, Manner::Stop},
    {"m", "mattino", "m", "mm", GeminationBehavior::SingleAndGeminate, Manner::Nasal},
    {"v", "vacanza", "v", "vv", GeminationBehavior::SingleAndGeminate, Manner::Fricative},
    {"ci, ce", "città", "ʧ", "ʧʧ", GeminationBehavior::SingleAndGeminate, Manner::Affricate},
    {"f", "fiamme", "f", "ff", GeminationBehavior::SingleAndGeminate, Manner::Fricative},
    {"g", "gatto", "g", "gg", GeminationBehavior::SingleAndGeminate, Manner::Stop},
    {"b", "bambino", "b", "bb", GeminationBehavior::SingleAndGeminate, Manner::Stop},
    {"gi", "giardino", "ʤ", "ʤʤ", GeminationBehavior::SingleAndGeminate, Manner::Affricate},
    {"z", "zitto", "ʦ", "ʦʦ", GeminationBehavior::OnlyGeminate, Manner::Affricate},
    {"gl", "figlio", "ʎ", "ʎʎ", GeminationBehavior::OnlyGeminate, Manner::Lateral},
    {"sci", "scienzato", "ʃ", "ʃʃ", GeminationBehavior::OnlyGeminate, Manner::Fricative},
    {"z", "zoo", "ʣ", "ʣʣ", GeminationBehavior::OnlyGeminate, Manner::Affricate},
    {"s", "svetta", "z", "", GeminationBehavior::NeverGeminate, Manner::Fricative},
    {"gn", "gnomi", "ɲ", "ɲɲ", GeminationBehavior::OnlyGeminate, Manner::Nasal},
}};

/// Matches a phone label against either the single or the doubled transcription.
/// A doubled label of a never-geminating consonant ("zz") still resolves to it.
inline std::optional<Consonant> find_consonant(std::string_view label) {
  for (const auto& c : kItalianConsonants) {
    if (label == c.ipa || (!c.geminate_ipa.empty() && label == c.geminate_ipa)) return c;
  }
  for (const auto& c : kItalianConsonants) {
    if (label.size() == 2 * c.ipa.size() && label.substr(0, c.ipa.size()) == c.ipa &&
        label.substr(c.ipa.size()) == c.ipa)
      return c;
  }
  return std::nullopt;
}

inline bool is_stop(std::string_view label) {
  const auto c = find_consonant(label);
  return c && c->manner == Manner::Stop;
}

inline bool is_voiced_stop(std::string_view label) {
  return is_stop(label) && (label.front() == 'b' || label.front() == 'd' || label.front() == 'g');
}

}  // namespace gemstop
