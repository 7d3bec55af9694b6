#include "hopadv/text.hpp"

#include <algorithm>
#include <cctype>

namespace hopadv::text {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ascii_alnum(char c) { return is_ascii_digit(c) || is_ascii_alpha(c); }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // drop leading spaces
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_number_token(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i >= s.size()) return false;
  bool digit_seen = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (is_ascii_digit(c)) {
      digit_seen = true;
    } else if (c != ',' && c != '.') {
      return false;
    }
  }
  return digit_seen;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// ---- Porter stemmer ----
// Straight implementation of the five-step algorithm. Operates on a
// mutable buffer `b` with end index `k` (inclusive), as in the original
// description.

namespace {

class PorterBuffer {
 public:
  explicit PorterBuffer(std::string_view w) : b_(w), k_(static_cast<int>(w.size()) - 1) {}

  std::string result() const { return b_.substr(0, k_ + 1); }

  bool is_consonant(int i) const {
    char c = b_[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !is_consonant(i - 1);
    return true;
  }

  // Measure of the stem b[0..j]: number of VC sequences.
  int m(int j) const {
    int n = 0, i = 0;
    while (true) {
      if (i > j) return n;
      if (!is_consonant(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j) return n;
        if (is_consonant(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j) return n;
        if (!is_consonant(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem(int j) const {
    for (int i = 0; i <= j; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool double_consonant(int j) const {
    if (j < 1) return false;
    if (b_[j] != b_[j - 1]) return false;
    return is_consonant(j);
  }

  // cvc at i, where the second c is not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !is_consonant(i) || is_consonant(i - 1) || !is_consonant(i - 2))
      return false;
    char c = b_[i];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(const char* s) {
    int len = static_cast<int>(std::char_traits<char>::length(s));
    if (len > k_ + 1) return false;
    if (b_.compare(k_ - len + 1, len, s) != 0) return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(const char* s) {
    int len = static_cast<int>(std::char_traits<char>::length(s));
    b_.replace(j_ + 1, b_.size() - j_ - 1, s);
    k_ = j_ + len;
  }

  void r(const char* s) {
    if (m(j_) > 0) set_to(s);
  }

  void step1ab() {
    if (b_[k_] == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (k_ >= 1 && b_[k_ - 1] != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (m(j_) > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem(j_)) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        char c = b_[k_];
        if (c != 'l' && c != 's' && c != 'z') --k_;
      } else if (m(k_) == 1 && cvc(k_)) {
        j_ = k_;
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem(j_)) b_[k_] = 'i';
  }

  void step2() {
    if (k_ < 1) return;
    switch (b_[k_ - 1]) {
      case 'a':
        if (ends("ational")) { r("ate"); break; }
        if (ends("tional")) { r("tion"); break; }
        break;
      case 'c':
        if (ends("enci")) { r("ence"); break; }
        if (ends("anci")) { r("ance"); break; }
        break;
      case 'e':
        if (ends("izer")) { r("ize"); break; }
        break;
      case 'l':
        if (ends("bli")) { r("ble"); break; }
        if (ends("alli")) { r("al"); break; }
        if (ends("entli")) { r("ent"); break; }
        if (ends("eli")) { r("e"); break; }
        if (ends("ousli")) { r("ous"); break; }
        break;
      case 'o':
        if (ends("ization")) { r("ize"); break; }
        if (ends("ation")) { r("ate"); break; }
        if (ends("ator")) { r("ate"); break; }
        break;
      case 's':
        if (ends("alism")) { r("al"); break; }
        if (ends("iveness")) { r("ive"); break; }
        if (ends("fulness")) { r("ful"); break; }
        if (ends("ousness")) { r("ous"); break; }
        break;
      case 't':
        if (ends("aliti")) { r("al"); break; }
        if (ends("iviti")) { r("ive"); break; }
        if (ends("biliti")) { r("ble"); break; }
        break;
      case 'g':
        if (ends("logi")) { r("log"); break; }
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (b_[k_]) {
      case 'e':
        if (ends("icate")) { r("ic"); break; }
        if (ends("ative")) { r(""); break; }
        if (ends("alize")) { r("al"); break; }
        break;
      case 'i':
        if (ends("iciti")) { r("ic"); break; }
        break;
      case 'l':
        if (ends("ical")) { r("ic"); break; }
        if (ends("ful")) { r(""); break; }
        break;
      case 's':
        if (ends("ness")) { r(""); break; }
        break;
      default:
        break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    switch (b_[k_ - 1]) {
      case 'a': if (ends("al")) break; return;
      case 'c': if (ends("ance") || ends("ence")) break; return;
      case 'e': if (ends("er")) break; return;
      case 'i': if (ends("ic")) break; return;
      case 'l': if (ends("able") || ends("ible")) break; return;
      case 'n':
        if (ends("ant") || ends("ement") || ends("ment") || ends("ent")) break;
        return;
      case 'o':
        if (ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) break;
        if (ends("ou")) break;
        return;
      case 's': if (ends("ism")) break; return;
      case 't': if (ends("ate") || ends("iti")) break; return;
      case 'u': if (ends("ous")) break; return;
      case 'v': if (ends("ive")) break; return;
      case 'z': if (ends("ize")) break; return;
      default: return;
    }
    if (m(j_) > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (b_[k_] == 'e') {
      int a = m(k_);
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (b_[k_] == 'l' && double_consonant(k_) && m(k_) > 1) --k_;
  }

 private:
  std::string b_;
  int j_ = 0;
  int k_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  for (char c : word)
    if (!(c >= 'a' && c <= 'z')) return std::string(word);
  PorterBuffer buf(word);
  buf.step1ab();
  buf.step1c();
  buf.step2();
  buf.step3();
  buf.step4();
  buf.step5();
  return buf.result();
}

bool contains_token_boundary(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::string h = lower(haystack);
  std::string n = lower(needle);
  size_t pos = 0;
  while ((pos = h.find(n, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_ascii_alnum(h[pos - 1]);
    size_t end = pos + n.size();
    bool right_ok = end == h.size() || !is_ascii_alnum(h[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  static const std::string no_space_before = ".,;:?!)]}%";
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t.empty()) continue;
    bool attach = false;
    if (!out.empty()) {
      if (t.size() == 1 && no_space_before.find(t[0]) != std::string::npos) attach = true;
      if (t[0] == '\'' || t == "n't") attach = true;
      char prev = out.back();
      if (prev == '(' || prev == '[' || prev == '{') attach = true;
    }
    if (!out.empty() && !attach) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string capitalize_first(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_ascii_alpha(c)) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    }
    if (c != '"' && c != '\'' && c != '(') break;
  }
  return out;
}

bool starts_with_vowel_sound(std::string_view word) {
  if (word.empty()) return false;
  char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace hopadv::text
