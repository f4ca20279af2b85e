#include "ancestral/newick.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

namespace ancestral {

namespace {

bool is_special(char c) {
  switch (c) {
    case '(': case ')': case ',': case ':': case ';': case '[': case ']': case '\'':
    case ' ': case '\t': case '\n': case '\r':
      return true;
    default:
      return false;
  }
}

class Parser {
 public:
  Parser(std::string_view text, LabelUniverse& labels, bool multi) : s_(text), labels_(labels), multi_(multi) {}

  SemiLabeledTree parse();

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError("position " + std::to_string(at) + ": " + msg, 0, at);
  }

  void skip() {
    for (;;) {
      while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r' || s_[pos_] == '\n')) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '[') {
        const auto close = s_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment", pos_);
        pos_ = close + 1;
        continue;
      }
      return;
    }
  }

  bool at_label() const { return pos_ < s_.size() && (s_[pos_] == '\'' || !is_special(s_[pos_])); }

  std::string read_label() {
    std::string out;
    if (s_[pos_] == '\'') {
      const auto start = pos_++;
      for (;;) {
        if (pos_ >= s_.size()) fail("unterminated quoted label", start);
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out += s_[pos_++];
      }
      return out;
    }
    while (pos_ < s_.size() && !is_special(s_[pos_])) out += s_[pos_++];
    return out;
  }

  void attach_labels(NodeId v, std::size_t at) {
    std::string text = read_label();
    std::vector<std::string> parts;
    if (multi_) {
      std::size_t b = 0;
      for (;;) {
        const auto e = text.find('+', b);
        parts.push_back(text.substr(b, e == std::string::npos ? std::string::npos : e - b));
        if (e == std::string::npos) break;
        b = e + 1;
      }
    } else {
      if (text.find('+') != std::string::npos) fail("'+' is reserved for multi-label output: " + text, at);
      parts.push_back(std::move(text));
    }
    for (auto& p : parts) {
      if (p.empty()) fail("empty label", at);
      const LabelId id = labels_.intern(p);
      if (tree_.contains(id)) fail("duplicate label '" + p + "'", at);
      tree_.add_label(v, id);
    }
  }

  void skip_length() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ':') {
      ++pos_;
      skip();
      const auto start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                  s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
        ++pos_;
      }
      if (pos_ == start) fail("expected a branch length after ':'", start);
    }
  }

  NodeId new_node(std::size_t at) {
    NodeId v;
    if (open_.empty()) {
      if (!tree_.empty()) fail("text after the end of the tree", at);
      v = tree_.add_root();
    } else {
      v = tree_.add_child(open_.back());
    }
    start_.push_back(at);
    return v;
  }

  std::string_view s_;
  LabelUniverse& labels_;
  bool multi_;
  std::size_t pos_ = 0;
  SemiLabeledTree tree_;
  std::vector<NodeId> open_;
  std::vector<std::size_t> start_;  // text offset per node
};

SemiLabeledTree Parser::parse() {
  bool need_subtree = true;
  for (;;) {
    skip();
    if (pos_ >= s_.size()) {
      if (tree_.empty()) fail("empty input", pos_);
      if (!open_.empty()) fail("unbalanced parentheses: missing ')'", pos_);
      fail("missing ';'", pos_);
    }
    const char c = s_[pos_];
    if (need_subtree) {
      if (c == '(') {
        open_.push_back(new_node(pos_));
        ++pos_;
      } else if (at_label()) {
        const auto at = pos_;
        attach_labels(new_node(at), at);
        skip_length();
        need_subtree = false;
      } else if (c == ',' || c == ')' || c == ';') {
        fail("empty subtree", pos_);
      } else {
        fail(std::string("unexpected '") + c + "'", pos_);
      }
      continue;
    }
    if (open_.empty()) {
      if (c != ';') fail(c == ')' ? "unbalanced parentheses: unexpected ')'" : "expected ';'", pos_);
      ++pos_;
      skip();
      if (pos_ < s_.size()) fail("text after ';'", pos_);
      break;
    }
    if (c == ',') {
      ++pos_;
      need_subtree = true;
    } else if (c == ')') {
      const NodeId v = open_.back();
      open_.pop_back();
      ++pos_;
      skip();
      if (at_label()) attach_labels(v, pos_);
      skip_length();
    } else {
      fail(std::string("expected ',' or ')' but found '") + c + "'", pos_);
    }
  }
  if (auto v = validate(tree_)) {
    const auto at = v->node == kNoNode ? 0 : start_[static_cast<std::size_t>(v->node)];
    fail("degree rule: " + v->message, at);
  }
  return std::move(tree_);
}

}  // namespace

SemiLabeledTree parse_newick(std::string_view text, LabelUniverse& labels, bool multi_labels) {
  return Parser(text, labels, multi_labels).parse();
}

std::string newick_quote(std::string_view name) {
  bool plain = !name.empty();
  for (char c : name) {
    if (is_special(c) || c == '+') plain = false;
  }
  if (plain) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string write_newick(const SemiLabeledTree& input, const LabelUniverse& labels, bool strip_synthetic) {
  if (input.empty()) return ";";
  SemiLabeledTree stripped;
  const SemiLabeledTree* tp = &input;
  if (strip_synthetic) {
    std::vector<LabelId> keep;
    bool any = false;
    for (LabelId l : input.label_set()) {
      if (labels.synthetic(l)) {
        any = true;
      } else {
        keep.push_back(l);
      }
    }
    if (any && !keep.empty()) {
      stripped = restrict_to(input, keep);
      tp = &stripped;
    }
  }
  const auto& t = *tp;
  const auto n = t.node_count();
  const auto order = t.preorder();

  // Sort key: smallest display name below each node.
  std::vector<const std::string*> key(n, nullptr);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    const std::string* best = nullptr;
    for (LabelId l : t.labels(v)) {
      if (!best || labels.name(l) < *best) best = &labels.name(l);
    }
    for (NodeId c : t.children(v)) {
      if (key[static_cast<std::size_t>(c)] && (!best || *key[static_cast<std::size_t>(c)] < *best)) best = key[static_cast<std::size_t>(c)];
    }
    key[static_cast<std::size_t>(v)] = best;
  }
  auto label_text = [&](NodeId v) {
    std::vector<std::string> names;
    for (LabelId l : t.labels(v)) names.push_back(labels.name(l));
    std::sort(names.begin(), names.end());
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "+" : "") + newick_quote(names[i]);
    return s;
  };

  std::string out;
  struct Frame {
    NodeId v;
    std::vector<NodeId> kids;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  auto push = [&](NodeId v) {
    Frame f{v, {t.children(v).begin(), t.children(v).end()}, 0};
    std::sort(f.kids.begin(), f.kids.end(), [&](NodeId a, NodeId b) {
      const auto& ka = *key[static_cast<std::size_t>(a)];
      const auto& kb = *key[static_cast<std::size_t>(b)];
      return ka < kb;
    });
    if (!f.kids.empty()) out += '(';
    stack.push_back(std::move(f));
  };
  push(t.root());
  while (!stack.empty()) {
    auto& f = stack.back();
    if (f.next < f.kids.size()) {
      if (f.next > 0) out += ',';
      const NodeId c = f.kids[f.next++];
      push(c);
      continue;
    }
    if (!f.kids.empty()) out += ')';
    out += label_text(f.v);
    stack.pop_back();
  }
  return out + ";";
}

Profile read_profile(std::istream& in) {
  Profile p;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      p.trees.push_back(parse_newick(line, p.labels));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(number) + ", " + e.what(), number, e.position());
    }
  }
  return p;
}

Profile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_profile(in);
}

void write_profile(const Profile& profile, std::ostream& out) {
  for (const auto& t : profile.trees) out << write_newick(t, profile.labels) << '\n';
}

SemiLabeledTree read_tree_file(const std::string& path, LabelUniverse& labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      return parse_newick(line, labels, true);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(number) + ", " + e.what(), number, e.position());
    }
  }
  throw ParseError("no tree in " + path, number, 0);
}

}  // namespace ancestral
