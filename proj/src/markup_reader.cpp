#include "markup_reader.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <utility>

#include "tabscore/errors.hpp"
#include "tabscore/text.hpp"

namespace tabscore::detail {

namespace {

constexpr int kMaxSpan = 1000;

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;

  std::optional<std::string_view> attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return std::string_view(v);
    }
    return std::nullopt;
  }
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

// Parses the tag starting at markup[pos] == '<'. Returns the position just
// past the closing '>'.
std::size_t read_tag(std::string_view markup, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  if (i < markup.size() && markup[i] == '/') {
    tag.closing = true;
    ++i;
  }
  std::size_t name_start = i;
  while (i < markup.size() && !is_ws(markup[i]) && markup[i] != '>' && markup[i] != '/') ++i;
  tag.name = lower(markup.substr(name_start, i - name_start));
  while (true) {
    while (i < markup.size() && is_ws(markup[i])) ++i;
    if (i >= markup.size()) throw ParseError("unterminated tag <" + tag.name);
    if (markup[i] == '>') return i + 1;
    if (markup[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    std::size_t key_start = i;
    while (i < markup.size() && !is_ws(markup[i]) && markup[i] != '=' && markup[i] != '>' &&
           markup[i] != '/')
      ++i;
    std::string key = lower(markup.substr(key_start, i - key_start));
    while (i < markup.size() && is_ws(markup[i])) ++i;
    std::string value;
    if (i < markup.size() && markup[i] == '=') {
      ++i;
      while (i < markup.size() && is_ws(markup[i])) ++i;
      if (i < markup.size() && (markup[i] == '"' || markup[i] == '\'')) {
        const char quote = markup[i];
        const auto end = markup.find(quote, i + 1);
        if (end == std::string_view::npos) throw ParseError("unterminated attribute value in <" + tag.name);
        value = std::string(markup.substr(i + 1, end - i - 1));
        i = end + 1;
      } else {
        std::size_t v_start = i;
        while (i < markup.size() && !is_ws(markup[i]) && markup[i] != '>') ++i;
        value = std::string(markup.substr(v_start, i - v_start));
      }
    }
    if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
  }
}

void decode_entities(std::string_view in, std::string& out) {
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != '&') {
      out.push_back(in[i++]);
      continue;
    }
    const auto semi = in.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(in[i++]);
      continue;
    }
    std::string_view name = in.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (!name.empty() && name[0] == '#') {
      unsigned long value = 0;
      std::from_chars_result res{};
      if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
        res = std::from_chars(name.data() + 2, name.data() + name.size(), value, 16);
      } else {
        res = std::from_chars(name.data() + 1, name.data() + name.size(), value, 10);
      }
      if (res.ec == std::errc{} && res.ptr == name.data() + name.size() && value > 0 &&
          value <= 0x10FFFF && !(value >= 0xD800 && value <= 0xDFFF))
        cp = static_cast<char32_t>(value);
    } else if (name == "amp") {
      cp = U'&';
    } else if (name == "lt") {
      cp = U'<';
    } else if (name == "gt") {
      cp = U'>';
    } else if (name == "quot") {
      cp = U'"';
    } else if (name == "apos") {
      cp = U'\'';
    } else if (name == "nbsp") {
      cp = 0xA0;
    }
    if (!cp) {
      out.push_back(in[i++]);
      continue;
    }
    text::append_utf8(out, *cp);
    i = semi + 1;
  }
}

int read_span(const Tag& tag, std::string_view key) {
  auto raw = tag.attr(key);
  if (!raw) return 1;
  std::string_view v = *raw;
  while (!v.empty() && is_ws(v.front())) v.remove_prefix(1);
  long value = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), value);
  if (res.ec != std::errc{} || value < 1) return 1;
  return static_cast<int>(std::min<long>(value, kMaxSpan));
}

bool is_structural(std::string_view name) {
  return name == "table" || name == "thead" || name == "tbody" || name == "tfoot" || name == "tr" ||
         name == "td" || name == "th" || name == "caption" || name == "colgroup";
}

bool separates_words(std::string_view name) {
  return name == "br" || name == "p" || name == "div" || name == "li" || name == "hr";
}

class Builder {
 public:
  void start(const Tag& tag) {
    const std::string& name = tag.name;
    if (stack_.empty()) {
      if (name == "table") {
        tables_.emplace_back();
        open(tag);
      }
      return;
    }
    const std::string& top = stack_.back();
    if (top == "caption" || top == "colgroup") {
      if (is_structural(name)) throw ParseError("<" + name + "> inside <" + top + ">");
      return;
    }
    if (top == "td" || top == "th") {
      if (is_structural(name)) throw ParseError("<" + name + "> inside an unclosed cell");
      if (separates_words(name)) cell().text.push_back(' ');
      return;
    }
    if (name == "table") throw ParseError("nested <table>");
    if (name == "thead" || name == "tbody" || name == "tfoot" || name == "caption" || name == "colgroup") {
      if (top != "table") throw ParseError("<" + name + "> inside <" + top + ">");
      open(tag);
      return;
    }
    if (name == "tr") {
      if (top == "tr") throw ParseError("<tr> inside an unclosed <tr>");
      tables_.back().rows.emplace_back();
      open(tag);
      return;
    }
    if (name == "td" || name == "th") {
      if (top != "tr") throw ParseError("<" + name + "> outside of a row");
      MarkupCell c;
      c.rowspan = read_span(tag, "rowspan");
      c.colspan = read_span(tag, "colspan");
      tables_.back().rows.back().push_back(std::move(c));
      open(tag);
      return;
    }
    // col and any other tag between structural elements carries no content
  }

  void end(const Tag& tag) {
    const std::string& name = tag.name;
    if (stack_.empty()) return;
    const std::string& top = stack_.back();
    if ((top == "td" || top == "th") && !is_structural(name)) {
      if (separates_words(name)) cell().text.push_back(' ');
      return;
    }
    if (!is_structural(name)) return;
    if (name != top) throw ParseError("mismatched </" + name + ">, expected </" + top + ">");
    stack_.pop_back();
  }

  void text(std::string_view raw) {
    if (stack_.empty()) return;
    const std::string& top = stack_.back();
    if (top != "td" && top != "th") return;
    decode_entities(raw, cell().text);
  }

  bool in_table() const { return !stack_.empty(); }

  std::vector<MarkupTable> finish() {
    if (!stack_.empty()) throw ParseError("unclosed <" + stack_.back() + ">");
    return std::move(tables_);
  }

 private:
  void open(const Tag& tag) {
    if (!tag.self_closing) {
      stack_.push_back(tag.name);
    }
  }

  MarkupCell& cell() { return tables_.back().rows.back().back(); }

  std::vector<MarkupTable> tables_;
  std::vector<std::string> stack_;
};

}  // namespace

std::vector<MarkupTable> read_tables(std::string_view markup) {
  Builder builder;
  std::size_t pos = 0;
  while (pos < markup.size()) {
    if (markup[pos] != '<') {
      auto next = markup.find('<', pos);
      if (next == std::string_view::npos) next = markup.size();
      builder.text(markup.substr(pos, next - pos));
      pos = next;
      continue;
    }
    if (markup.compare(pos, 4, "<!--") == 0) {
      const auto end = markup.find("-->", pos + 4);
      if (end == std::string_view::npos) throw ParseError("unterminated comment");
      pos = end + 3;
      continue;
    }
    if (pos + 1 < markup.size() && (markup[pos + 1] == '!' || markup[pos + 1] == '?')) {
      const auto end = markup.find('>', pos);
      if (end == std::string_view::npos) throw ParseError("unterminated declaration");
      pos = end + 1;
      continue;
    }
    const bool tag_like = pos + 1 < markup.size() &&
                          (std::isalpha(static_cast<unsigned char>(markup[pos + 1])) || markup[pos + 1] == '/');
    if (!tag_like) {
      builder.text(markup.substr(pos, 1));
      ++pos;
      continue;
    }
    Tag tag;
    pos = read_tag(markup, pos, tag);
    if (tag.closing) {
      builder.end(tag);
      continue;
    }
    builder.start(tag);
    if (tag.name == "script" || tag.name == "style") {
      const auto close = lower(markup.substr(pos)).find("</" + tag.name);
      if (close == std::string::npos) throw ParseError("unclosed <" + tag.name + ">");
      const auto gt = markup.find('>', pos + close);
      if (gt == std::string_view::npos) throw ParseError("unterminated tag </" + tag.name);
      pos = gt + 1;
    }
  }
  auto tables = builder.finish();
  if (tables.empty()) throw NoTableError("no <table> element in markup");
  return tables;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace tabscore::detail
