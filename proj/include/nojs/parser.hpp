#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nojs/dom.hpp"
#include "nojs/encoding.hpp"
#include "nojs/entities.hpp"
#include "nojs/text.hpp"

namespace nojs {

namespace parser_detail {

struct Token {
  enum class Type { start_tag, end_tag, text, comment, doctype, eof };
  Type type = Type::eof;
  std::string name;  // tag name, lowercased
  std::vector<Attribute> attributes;
  std::string data;  // text / comment payload, references decoded
  bool self_closing = false;
};

// Tokenizer over decoded UTF-8 input. Raw-text elements switch the lexer
// into a mode that scans for the matching end tag.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view input) : in_(input) {}

  Token next() {
    if (!raw_end_.empty()) return raw_text();
    if (pos_ >= in_.size()) return Token{};
    if (in_[pos_] != '<') return data_text();
    if (auto t = markup(); t.type != Token::Type::eof) return t;
    // A lone '<' is text.
    Token t;
    t.type = Token::Type::text;
    t.data = "<";
    ++pos_;
    return t;
  }

 private:
  static bool is_alpha(char c) { return (c | 0x20) >= 'a' && (c | 0x20) <= 'z'; }

  Token data_text() {
    size_t end = in_.find('<', pos_);
    if (end == std::string_view::npos) end = in_.size();
    Token t;
    t.type = Token::Type::text;
    t.data = entities::decode(in_.substr(pos_, end - pos_), false);
    pos_ = end;
    return t;
  }

  Token raw_text() {
    // Find "</name" followed by whitespace, '/' or '>'.
    size_t search = pos_;
    size_t end = in_.size();
    if (raw_end_ != "plaintext") {
      for (;;) {
        size_t lt = in_.find("</", search);
        if (lt == std::string_view::npos) break;
        size_t after = lt + 2 + raw_end_.size();
        if (after <= in_.size() && text::iequals(in_.substr(lt + 2, raw_end_.size()), raw_end_) &&
            (after == in_.size() || text::is_ascii_whitespace(in_[after]) || in_[after] == '/' ||
             in_[after] == '>')) {
          end = lt;
          break;
        }
        search = lt + 2;
      }
    }
    Token t;
    t.type = Token::Type::text;
    auto raw = in_.substr(pos_, end - pos_);
    t.data = rcdata_ ? entities::decode(raw, false) : std::string(raw);
    pos_ = end;
    raw_end_.clear();
    if (t.data.empty()) return next();
    return t;
  }

  void skip_to_gt() {
    size_t gt = in_.find('>', pos_);
    pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
  }

  Token markup() {
    std::string_view rest = in_.substr(pos_);
    Token t;
    if (rest.starts_with("<!--")) {
      t.type = Token::Type::comment;
      size_t body = pos_ + 4;
      if (in_.substr(body).starts_with(">")) {
        pos_ = body + 1;
        return t;
      }
      if (in_.substr(body).starts_with("->")) {
        pos_ = body + 2;
        return t;
      }
      size_t close = in_.find("-->", body);
      if (close == std::string_view::npos) {
        t.data = std::string(in_.substr(body));
        pos_ = in_.size();
      } else {
        t.data = std::string(in_.substr(body, close - body));
        pos_ = close + 3;
      }
      return t;
    }
    if (rest.starts_with("<!")) {
      t.type = text::istarts_with(rest.substr(2), "doctype") ? Token::Type::doctype
                                                            : Token::Type::comment;
      size_t start = pos_ + 2;
      skip_to_gt();
      if (t.type == Token::Type::comment) {
        size_t stop = pos_ > start && in_[pos_ - 1] == '>' ? pos_ - 1 : pos_;
        t.data = std::string(in_.substr(start, stop - start));
      }
      return t;
    }
    if (rest.starts_with("<?")) {
      t.type = Token::Type::comment;
      size_t start = pos_ + 1;
      skip_to_gt();
      size_t stop = pos_ > start && in_[pos_ - 1] == '>' ? pos_ - 1 : pos_;
      t.data = std::string(in_.substr(start, stop - start));
      return t;
    }
    if (rest.starts_with("</")) {
      if (rest.size() > 2 && is_alpha(rest[2])) {
        pos_ += 2;
        t.type = Token::Type::end_tag;
        t.name = tag_name();
        attributes(t);  // parsed and dropped
        t.attributes.clear();
        return t;
      }
      if (rest.size() > 2 && rest[2] == '>') {
        pos_ += 3;
        return next();
      }
      if (rest.size() == 2) return Token{};
      t.type = Token::Type::comment;
      size_t start = pos_ + 2;
      skip_to_gt();
      size_t stop = pos_ > start && in_[pos_ - 1] == '>' ? pos_ - 1 : pos_;
      t.data = std::string(in_.substr(start, stop - start));
      return t;
    }
    if (rest.size() > 1 && is_alpha(rest[1])) {
      ++pos_;
      t.type = Token::Type::start_tag;
      t.name = tag_name();
      attributes(t);
      if (t.name == "script" || t.name == "style" || t.name == "xmp" || t.name == "iframe" ||
          t.name == "noembed" || t.name == "noframes" || t.name == "plaintext") {
        raw_end_ = t.name;
        rcdata_ = false;
      } else if (t.name == "textarea" || t.name == "title") {
        raw_end_ = t.name;
        rcdata_ = true;
      }
      return t;
    }
    return Token{};
  }

  std::string tag_name() {
    size_t start = pos_;
    while (pos_ < in_.size() && !text::is_ascii_whitespace(in_[pos_]) && in_[pos_] != '/' &&
           in_[pos_] != '>')
      ++pos_;
    return text::to_ascii_lower(in_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < in_.size() && text::is_ascii_whitespace(in_[pos_])) ++pos_;
  }

  void attributes(Token& t) {
    for (;;) {
      skip_ws();
      if (pos_ >= in_.size()) return;
      char c = in_[pos_];
      if (c == '>') {
        ++pos_;
        return;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          t.self_closing = true;
          ++pos_;
          return;
        }
        continue;
      }
      size_t start = pos_;
      ++pos_;  // first char may be '='
      while (pos_ < in_.size() && !text::is_ascii_whitespace(in_[pos_]) && in_[pos_] != '/' &&
             in_[pos_] != '>' && in_[pos_] != '=')
        ++pos_;
      std::string name = text::to_ascii_lower(in_.substr(start, pos_ - start));
      std::string value;
      skip_ws();
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        skip_ws();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          char q = in_[pos_++];
          size_t close = in_.find(q, pos_);
          if (close == std::string_view::npos) close = in_.size();
          value = entities::decode(in_.substr(pos_, close - pos_), true);
          pos_ = close < in_.size() ? close + 1 : close;
        } else {
          size_t vs = pos_;
          while (pos_ < in_.size() && !text::is_ascii_whitespace(in_[pos_]) && in_[pos_] != '>')
            ++pos_;
          value = entities::decode(in_.substr(vs, pos_ - vs), true);
        }
      }
      bool duplicate = false;
      for (const auto& a : t.attributes)
        if (a.name == name) duplicate = true;
      if (!duplicate) t.attributes.push_back({std::move(name), std::move(value)});
    }
  }

  std::string_view in_;
  size_t pos_ = 0;
  std::string raw_end_;
  bool rcdata_ = false;
};

template <size_t N>
bool one_of(std::string_view s, const std::string_view (&set)[N]) {
  for (auto v : set)
    if (v == s) return true;
  return false;
}

inline constexpr std::string_view kSpecial[] = {
    "address", "applet", "area", "article", "aside", "base", "basefont", "bgsound",
    "blockquote", "body", "br", "button", "caption", "center", "col", "colgroup",
    "dd", "details", "dir", "div", "dl", "dt", "embed", "fieldset", "figcaption",
    "figure", "footer", "form", "frame", "frameset", "h1", "h2", "h3", "h4", "h5",
    "h6", "head", "header", "hgroup", "hr", "html", "iframe", "img", "input",
    "keygen", "li", "link", "listing", "main", "marquee", "menu", "meta", "nav",
    "noembed", "noframes", "noscript", "object", "ol", "p", "param", "plaintext",
    "pre", "script", "section", "select", "source", "style", "summary", "table",
    "tbody", "td", "template", "textarea", "tfoot", "th", "thead", "title", "tr",
    "track", "ul", "wbr", "xmp"};

// Start tags that implicitly close an open <p>.
inline constexpr std::string_view kClosesP[] = {
    "address", "article", "aside", "blockquote", "center", "details", "dialog", "dir",
    "div", "dl", "fieldset", "figcaption", "figure", "footer", "header", "hgroup",
    "main", "menu", "nav", "ol", "p", "section", "summary", "ul", "pre", "listing",
    "table", "hr", "xmp", "plaintext", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "li", "dd", "dt"};

inline constexpr std::string_view kHeadings[] = {"h1", "h2", "h3", "h4", "h5", "h6"};

inline constexpr std::string_view kScopeBoundary[] = {
    "applet", "caption", "html", "table", "td", "th", "marquee", "object", "template",
    "foreignobject", "desc"};

inline constexpr std::string_view kHeadContent[] = {"base", "basefont", "bgsound", "link",
                                                    "meta", "style", "script", "title",
                                                    "noframes", "template"};

inline constexpr std::string_view kTableSections[] = {"tbody", "thead", "tfoot"};

class TreeBuilder {
 public:
  explicit TreeBuilder(std::string_view input) : tok_(input) {}

  DomDocument build() && {
    for (;;) {
      Token t = tok_.next();
      if (t.type == Token::Type::eof) break;
      process(t);
    }
    ensure_body();
    return std::move(b_).finalize();
  }

 private:
  using Index = DocumentBuilder::Index;
  enum class Mode { before_html, before_head, in_head, in_head_noscript, after_head, in_body,
                    in_frameset };

  Index current() const { return stack_.empty() ? DocumentBuilder::kRoot : stack_.back(); }
  const std::string& tag_of(Index i) const { return b_.at(i).tag; }

  Index make_element(const Token& t) {
    DomNode n;
    n.kind = NodeKind::element;
    n.tag = t.name;
    n.attributes = t.attributes;
    return b_.create(std::move(n));
  }

  Index make_element(std::string_view tag) {
    DomNode n;
    n.kind = NodeKind::element;
    n.tag = std::string(tag);
    return b_.create(std::move(n));
  }

  // Inserts at the current node (or foster-parents before an open table
  // when the current node is a table structure element).
  Index insert(Index el, bool push = true) {
    Index parent = current();
    if (in_table_structure(parent) && !is_table_child(tag_of(el))) {
      foster(el);
    } else {
      b_.append(parent, el);
    }
    if (push) stack_.push_back(el);
    return el;
  }

  static bool is_table_child(std::string_view tag) {
    return tag == "tbody" || tag == "thead" || tag == "tfoot" || tag == "tr" || tag == "td" ||
           tag == "th" || tag == "caption" || tag == "colgroup" || tag == "col" ||
           tag == "script" || tag == "style" || tag == "template" || tag == "form" ||
           tag == "input";
  }

  bool in_table_structure(Index i) const {
    if (i == DocumentBuilder::kRoot) return false;
    const auto& tag = tag_of(i);
    return tag == "table" || tag == "tbody" || tag == "thead" || tag == "tfoot" || tag == "tr";
  }

  void foster(Index el) {
    for (size_t k = stack_.size(); k-- > 0;) {
      if (tag_of(stack_[k]) == "table") {
        Index table = stack_[k];
        Index parent = b_.parent_of(table);
        b_.insert_before(parent, el, table);
        return;
      }
    }
    b_.append(current(), el);
  }

  void insert_text(std::string_view s) {
    Index parent = current();
    if (in_table_structure(parent) && !text::is_blank(s)) {
      for (size_t k = stack_.size(); k-- > 0;) {
        if (tag_of(stack_[k]) == "table") {
          Index table = stack_[k];
          b_.text_before(b_.parent_of(table), s, table);
          return;
        }
      }
    }
    b_.append_text(parent, s);
  }

  void insert_comment(const Token& t, Index parent) {
    DomNode c;
    c.kind = NodeKind::comment;
    c.text = t.data;
    b_.append(parent, b_.create(std::move(c)));
  }

  template <size_t N>
  bool in_scope(std::string_view tag, const std::string_view (&extra)[N]) const {
    for (size_t k = stack_.size(); k-- > 0;) {
      const auto& t = tag_of(stack_[k]);
      if (t == tag) return true;
      if (one_of(t, kScopeBoundary) || one_of(t, extra)) return false;
    }
    return false;
  }
  bool in_scope(std::string_view tag) const {
    static constexpr std::string_view kNone[] = {""};
    return in_scope(tag, kNone);
  }
  bool in_button_scope(std::string_view tag) const {
    static constexpr std::string_view kButton[] = {"button"};
    return in_scope(tag, kButton);
  }
  bool in_list_scope(std::string_view tag) const {
    static constexpr std::string_view kList[] = {"ol", "ul"};
    return in_scope(tag, kList);
  }
  bool in_table_scope(std::string_view tag) const {
    for (size_t k = stack_.size(); k-- > 0;) {
      const auto& t = tag_of(stack_[k]);
      if (t == tag) return true;
      if (t == "html" || t == "table" || t == "template") return false;
    }
    return false;
  }

  void pop_until(std::string_view tag) {
    while (!stack_.empty()) {
      bool match = tag_of(stack_.back()) == tag;
      stack_.pop_back();
      if (match) return;
    }
  }

  void close_p_if_open() {
    if (in_button_scope("p")) pop_until("p");
  }

  void ensure_html() {
    if (html_) return;
    html_ = make_element("html");
    b_.append(DocumentBuilder::kRoot, *html_);
    stack_.push_back(*html_);
  }

  void ensure_head() {
    ensure_html();
    if (head_) return;
    head_ = make_element("head");
    b_.append(*html_, *head_);
  }

  void ensure_body() {
    ensure_head();
    if (body_ || frameset_) return;
    body_ = make_element("body");
    b_.append(*html_, *body_);
    stack_.resize(1);
    stack_.push_back(*body_);
    mode_ = Mode::in_body;
  }

  void merge_attributes(Index target, const Token& t) {
    auto& attrs = b_.at(target).attributes;
    for (const auto& a : t.attributes) {
      bool present = false;
      for (const auto& e : attrs)
        if (e.name == a.name) present = true;
      if (!present) attrs.push_back(a);
    }
  }

  void process(const Token& t) {
    if (t.type == Token::Type::doctype) doctype_seen_ = true;
    // A raw-text head element (title, style, script...) takes its text and
    // its end tag before the insertion mode gets a say.
    if (pending_head_raw_) {
      if (!stack_.empty() && stack_.back() == *pending_head_raw_) {
        if (t.type == Token::Type::text) return b_.append_text(current(), t.data);
        bool closes = t.type == Token::Type::end_tag && t.name == tag_of(*pending_head_raw_);
        stack_.pop_back();
        pending_head_raw_.reset();
        if (resume_noscript_) {
          resume_noscript_ = false;
          mode_ = Mode::in_head_noscript;
        }
        if (closes) return;
      } else {
        pending_head_raw_.reset();
      }
    }
    switch (mode_) {
      case Mode::before_html: return before_html(t);
      case Mode::before_head: return before_head(t);
      case Mode::in_head: return in_head(t);
      case Mode::in_head_noscript: return in_head_noscript(t);
      case Mode::after_head: return after_head(t);
      case Mode::in_body: return in_body(t);
      case Mode::in_frameset: return in_frameset(t);
    }
  }

  static std::string_view leading_ws(std::string_view s) {
    size_t i = 0;
    while (i < s.size() && text::is_ascii_whitespace(s[i])) ++i;
    return s.substr(0, i);
  }

  // Splits a text token into a whitespace prefix (handled in the current
  // mode) and a remainder that forces the next mode.
  bool consume_leading_whitespace(const Token& t, Token& rest, bool keep, Index parent) {
    auto ws = leading_ws(t.data);
    if (keep && !ws.empty()) b_.append_text(parent, ws);
    if (ws.size() == t.data.size()) return true;
    rest = t;
    rest.data = t.data.substr(ws.size());
    return false;
  }

  void before_html(const Token& t) {
    using T = Token::Type;
    if (t.type == T::doctype) return;
    if (t.type == T::comment) return insert_comment(t, DocumentBuilder::kRoot);
    if (t.type == T::text) {
      Token rest;
      if (consume_leading_whitespace(t, rest, false, DocumentBuilder::kRoot)) return;
      ensure_html();
      mode_ = Mode::before_head;
      return process(rest);
    }
    if (t.type == T::start_tag && t.name == "html") {
      ensure_html();
      merge_attributes(*html_, t);
      mode_ = Mode::before_head;
      return;
    }
    if (t.type == T::end_tag && t.name != "head" && t.name != "body" && t.name != "html" &&
        t.name != "br")
      return;
    ensure_html();
    mode_ = Mode::before_head;
    process(t);
  }

  void before_head(const Token& t) {
    using T = Token::Type;
    if (t.type == T::doctype) return;
    if (t.type == T::comment) return insert_comment(t, current());
    if (t.type == T::text) {
      Token rest;
      if (consume_leading_whitespace(t, rest, false, current())) return;
      ensure_head();
      stack_.push_back(*head_);
      mode_ = Mode::in_head;
      return process(rest);
    }
    if (t.type == T::start_tag && t.name == "html") return merge_attributes(*html_, t);
    if (t.type == T::start_tag && t.name == "head") {
      head_ = make_element(t);
      b_.append(*html_, *head_);
      stack_.push_back(*head_);
      mode_ = Mode::in_head;
      return;
    }
    if (t.type == T::end_tag && t.name != "head" && t.name != "body" && t.name != "html" &&
        t.name != "br")
      return;
    ensure_head();
    stack_.push_back(*head_);
    mode_ = Mode::in_head;
    process(t);
  }

  void pop_head() {
    if (!stack_.empty() && head_ && stack_.back() == *head_) stack_.pop_back();
    mode_ = Mode::after_head;
  }

  void in_head(const Token& t) {
    using T = Token::Type;
    if (t.type == T::doctype) return;
    if (t.type == T::comment) return insert_comment(t, current());
    if (t.type == T::text) {
      Token rest;
      if (consume_leading_whitespace(t, rest, true, current())) return;
      pop_head();
      return process(rest);
    }
    if (t.type == T::start_tag) {
      if (t.name == "html") return merge_attributes(*html_, t);
      if (one_of(t.name, kHeadContent)) {
        Index el = make_element(t);
        b_.append(current(), el);
        if (!dom_detail::is_void_element(t.name)) {
          stack_.push_back(el);
          pending_head_raw_ = el;
        }
        return;
      }
      if (t.name == "noscript") {
        Index el = make_element(t);
        b_.append(current(), el);
        stack_.push_back(el);
        mode_ = Mode::in_head_noscript;
        return;
      }
      if (t.name == "head") return;
    }
    if (t.type == T::end_tag) {
      if (t.name == "head") return pop_head();
      if (t.name != "body" && t.name != "html" && t.name != "br") return;
    }
    pop_head();
    process(t);
  }

  void in_head_noscript(const Token& t) {
    using T = Token::Type;
    if (t.type == T::doctype) return;
    if (t.type == T::end_tag && t.name == "noscript") {
      stack_.pop_back();
      mode_ = Mode::in_head;
      return;
    }
    if (t.type == T::comment) return insert_comment(t, current());
    if (t.type == T::text && text::is_blank(t.data)) return b_.append_text(current(), t.data);
    if (t.type == T::start_tag) {
      if (t.name == "html") return merge_attributes(*html_, t);
      if (t.name == "basefont" || t.name == "bgsound" || t.name == "link" || t.name == "meta" ||
          t.name == "noframes" || t.name == "style") {
        Index el = make_element(t);
        b_.append(current(), el);
        if (!dom_detail::is_void_element(t.name)) {
          stack_.push_back(el);
          pending_head_raw_ = el;
          mode_ = Mode::in_head;
          resume_noscript_ = true;
        }
        return;
      }
      if (t.name == "head" || t.name == "noscript") return;
    }
    if (t.type == T::end_tag && t.name != "br") return;
    stack_.pop_back();  // noscript
    mode_ = Mode::in_head;
    process(t);
  }

  void after_head(const Token& t) {
    using T = Token::Type;
    if (t.type == T::doctype) return;
    if (t.type == T::comment) return insert_comment(t, current());
    if (t.type == T::text) {
      Token rest;
      if (consume_leading_whitespace(t, rest, true, current())) return;
      ensure_body();
      return process(rest);
    }
    if (t.type == T::start_tag) {
      if (t.name == "html") return merge_attributes(*html_, t);
      if (t.name == "body") {
        body_ = make_element(t);
        b_.append(*html_, *body_);
        stack_.push_back(*body_);
        mode_ = Mode::in_body;
        return;
      }
      if (t.name == "frameset") {
        frameset_ = make_element(t);
        b_.append(*html_, *frameset_);
        stack_.push_back(*frameset_);
        mode_ = Mode::in_frameset;
        return;
      }
      if (one_of(t.name, kHeadContent)) {
        stack_.push_back(*head_);
        mode_ = Mode::in_head;
        in_head(t);
        // Raw head elements stay open until their end tag; everything else
        // returns straight to "after head".
        if (!pending_head_raw_) pop_head();
        return;
      }
      if (t.name == "head") return;
    }
    if (t.type == T::end_tag && t.name != "body" && t.name != "html" && t.name != "br") return;
    ensure_body();
    process(t);
  }

  void in_frameset(const Token& t) {
    using T = Token::Type;
    if (t.type == T::comment) return insert_comment(t, current());
    if (t.type == T::text) {
      std::string ws;
      for (char c : t.data)
        if (text::is_ascii_whitespace(c)) ws.push_back(c);
      return b_.append_text(current(), ws);
    }
    if (t.type == T::start_tag) {
      if (t.name == "frameset") {
        insert(make_element(t));
      } else if (t.name == "frame") {
        insert(make_element(t), false);
      } else if (t.name == "noframes") {
        insert(make_element(t));
      }
      return;
    }
    if (t.type == T::end_tag && (t.name == "frameset" || t.name == "noframes")) {
      if (stack_.size() > 1 && (tag_of(current()) == t.name)) stack_.pop_back();
    }
  }

  void clear_to_table_context() {
    while (!stack_.empty()) {
      const auto& tag = tag_of(stack_.back());
      if (tag == "table" || tag == "template" || tag == "html") return;
      stack_.pop_back();
    }
  }

  void clear_to_table_body_context() {
    while (!stack_.empty()) {
      const auto& tag = tag_of(stack_.back());
      if (one_of(tag, kTableSections) || tag == "table" || tag == "template" || tag == "html")
        return;
      stack_.pop_back();
    }
  }

  void in_body(const Token& t) {
    using T = Token::Type;
    switch (t.type) {
      case T::doctype:
      case T::eof:
        return;
      case T::comment:
        return insert_comment(t, current());
      case T::text:
        return insert_text(t.data);
      case T::start_tag:
        return body_start_tag(t);
      case T::end_tag:
        return body_end_tag(t);
    }
  }

  void body_start_tag(const Token& t) {
    const std::string& name = t.name;
    if (name == "html") return merge_attributes(*html_, t);
    if (name == "body") {
      if (body_) merge_attributes(*body_, t);
      return;
    }
    if (name == "head" || name == "frameset" || name == "frame") return;
    if (name == "form") {
      if (form_open_) return;
      close_p_if_open();
      Index el = insert(make_element(t));
      form_open_ = el;
      return;
    }
    if (name == "li") {
      for (size_t k = stack_.size(); k-- > 0;) {
        const auto& tag = tag_of(stack_[k]);
        if (tag == "li") {
          pop_until("li");
          break;
        }
        if (one_of(tag, kSpecial) && tag != "address" && tag != "div" && tag != "p") break;
      }
      close_p_if_open();
      insert(make_element(t));
      return;
    }
    if (name == "dd" || name == "dt") {
      for (size_t k = stack_.size(); k-- > 0;) {
        const auto& tag = tag_of(stack_[k]);
        if (tag == "dd" || tag == "dt") {
          pop_until(tag_of(stack_[k]));
          break;
        }
        if (one_of(tag, kSpecial) && tag != "address" && tag != "div" && tag != "p") break;
      }
      close_p_if_open();
      insert(make_element(t));
      return;
    }
    if (one_of(name, kHeadings)) {
      close_p_if_open();
      if (one_of(tag_of(current()), kHeadings)) stack_.pop_back();
      insert(make_element(t));
      return;
    }
    if (name == "table") {
      // Quirks mode (no doctype) keeps an open <p> around the table.
      if (doctype_seen_) close_p_if_open();
      insert(make_element(t));
      return;
    }
    if (name == "caption" || name == "colgroup") {
      if (in_table_scope("table")) clear_to_table_context();
      insert(make_element(t));
      return;
    }
    if (name == "col") {
      if (in_table_scope("table")) clear_to_table_context();
      insert(make_element(t), false);
      return;
    }
    if (one_of(name, kTableSections)) {
      if (in_table_scope("table")) clear_to_table_context();
      insert(make_element(t));
      return;
    }
    if (name == "tr") {
      if (in_table_scope("table")) {
        clear_to_table_body_context();
        if (tag_of(current()) == "table") insert(make_element("tbody"));
      }
      insert(make_element(t));
      return;
    }
    if (name == "td" || name == "th") {
      if (in_table_scope("table")) {
        if (in_table_scope("td")) pop_until("td");
        else if (in_table_scope("th")) pop_until("th");
        const auto& cur = tag_of(current());
        if (cur == "table") {
          insert(make_element("tbody"));
          insert(make_element("tr"));
        } else if (one_of(cur, kTableSections)) {
          insert(make_element("tr"));
        }
      }
      insert(make_element(t));
      return;
    }
    if (name == "a") {
      for (size_t k = stack_.size(); k-- > 0;) {
        const auto& tag = tag_of(stack_[k]);
        if (tag == "a") {
          stack_.resize(k);
          break;
        }
        if (one_of(tag, kScopeBoundary)) break;
      }
      insert(make_element(t));
      return;
    }
    if (name == "button") {
      if (in_scope("button")) pop_until("button");
      insert(make_element(t));
      return;
    }
    if (name == "option") {
      if (tag_of(current()) == "option") stack_.pop_back();
      insert(make_element(t));
      return;
    }
    if (name == "optgroup") {
      if (tag_of(current()) == "option") stack_.pop_back();
      if (tag_of(current()) == "optgroup") stack_.pop_back();
      insert(make_element(t));
      return;
    }
    if (name == "image") {
      Token img = t;
      img.name = "img";
      insert(make_element(img), false);
      return;
    }
    if (one_of(name, kClosesP)) close_p_if_open();
    bool foreign = foreign_depth_ > 0 || name == "svg" || name == "math";
    if (dom_detail::is_void_element(name) || (foreign && t.self_closing)) {
      insert(make_element(t), false);
      return;
    }
    insert(make_element(t));
    if (name == "svg" || name == "math") ++foreign_depth_;
  }

  void body_end_tag(const Token& t) {
    const std::string& name = t.name;
    if (name == "body" || name == "html") return;
    if (name == "br") {
      Token br;
      br.type = Token::Type::start_tag;
      br.name = "br";
      insert(make_element(br), false);
      return;
    }
    if (name == "p") {
      if (!in_button_scope("p")) {
        insert(make_element("p"), false);
        return;
      }
      pop_until("p");
      return;
    }
    if (name == "form") {
      auto node = form_open_;
      form_open_.reset();
      if (!node) return;
      for (size_t k = stack_.size(); k-- > 0;) {
        if (stack_[k] == *node) {
          stack_.erase(stack_.begin() + static_cast<std::ptrdiff_t>(k));
          return;
        }
        if (one_of(tag_of(stack_[k]), kScopeBoundary)) return;
      }
      return;
    }
    if (name == "li") {
      if (in_list_scope("li")) pop_until("li");
      return;
    }
    if (one_of(name, kHeadings)) {
      for (size_t k = stack_.size(); k-- > 0;) {
        const auto& tag = tag_of(stack_[k]);
        if (one_of(tag, kHeadings)) {
          stack_.resize(k);
          return;
        }
        if (one_of(tag, kScopeBoundary)) return;
      }
      return;
    }
    if (name == "table" || name == "tr" || name == "td" || name == "th" ||
        one_of(name, kTableSections) || name == "caption" || name == "colgroup") {
      if (in_table_scope(name)) pop_until(name);
      return;
    }
    if (name == "svg" || name == "math") {
      if (foreign_depth_ > 0) --foreign_depth_;
    }
    if (one_of(name, kSpecial)) {
      if (in_scope(name)) pop_until(name);
      return;
    }
    // Any other end tag: close the nearest matching element unless a
    // special element sits in between.
    for (size_t k = stack_.size(); k-- > 0;) {
      const auto& tag = tag_of(stack_[k]);
      if (tag == name) {
        stack_.resize(k);
        return;
      }
      if (one_of(tag, kSpecial)) return;
    }
  }

  Tokenizer tok_;
  DocumentBuilder b_;
  std::vector<Index> stack_;
  Mode mode_ = Mode::before_html;
  std::optional<Index> html_, head_, body_, frameset_, form_open_, pending_head_raw_;
  bool resume_noscript_ = false;
  bool doctype_seen_ = false;
  int foreign_depth_ = 0;
};

}  // namespace parser_detail

// Parses an HTML byte stream into a DomDocument. Malformed markup is
// recovered from, never rejected; only undecodable bytes raise DecodeError.
inline DomDocument parse_document(std::string_view bytes) {
  std::string decoded = decode_html_bytes(bytes);
  return parser_detail::TreeBuilder(decoded).build();
}

}  // namespace nojs
