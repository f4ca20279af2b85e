#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ancestral/tree.hpp"

namespace ancestral {

/// Malformed input. `line` is 0 when parsing a single string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t position)
      : std::runtime_error(what), line_(line), position_(position) {}
  std::size_t line() const { return line_; }
  std::size_t position() const { return position_; }

 private:
  std::size_t line_;
  std::size_t position_;
};

/// Parses one tree terminated by ';', interning labels into `labels`.
/// Internal labels are allowed, `:length` suffixes are discarded and `[...]`
/// comments skipped. With `multi_labels`, a label written `x+y` gives the node
/// both x and y; otherwise '+' inside a label is an error.
SemiLabeledTree parse_newick(std::string_view text, LabelUniverse& labels, bool multi_labels = false);

/// Deterministic rendering: children ordered by the smallest display name in
/// their subtree, several labels on one node joined by '+'. With
/// `strip_synthetic`, synthetic labels are dropped and the tree is
/// restricted to what remains.
std::string write_newick(const SemiLabeledTree& tree, const LabelUniverse& labels, bool strip_synthetic = false);

/// One tree per line; blank lines and lines starting with '#' are skipped.
Profile read_profile(std::istream& in);
/// Throws std::runtime_error if the file cannot be opened.
Profile read_profile_file(const std::string& path);
void write_profile(const Profile& profile, std::ostream& out);

/// Reads the first tree of a file in multi-label mode, against `labels`.
SemiLabeledTree read_tree_file(const std::string& path, LabelUniverse& labels);

/// Quotes a display name when it would not survive as a bare word.
std::string newick_quote(std::string_view name);

}  // namespace ancestral
