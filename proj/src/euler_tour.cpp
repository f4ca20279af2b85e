#include "ancestral/euler_tour.hpp"

#include <algorithm>

namespace ancestral::dyncon {

EulerTourForest::EulerTourForest(std::size_t vertex_count) : nodes_(1), vertex_(vertex_count, kNone) {}

EulerTourForest::Index EulerTourForest::alloc() {
  if (!free_.empty()) {
    const Index i = free_.back();
    free_.pop_back();
    at(i) = Node{};
    return i;
  }
  nodes_.emplace_back();
  return static_cast<Index>(nodes_.size() - 2);
}

void EulerTourForest::release(Index i) {
  at(i) = Node{};
  free_.push_back(i);
}

void EulerTourForest::pull(Index x) {
  Node& n = at(x);
  const Node& l = at(n.left);
  const Node& r = at(n.right);
  const bool vertex = n.flags & kIsVertex;
  n.vertices = l.vertices + r.vertices + (vertex ? 1 : 0);
  n.min_vertex = std::min({l.min_vertex, r.min_vertex, vertex ? n.payload : kNoMin});
  // Own marks sit two bits below their aggregate counterparts.
  const auto own = static_cast<std::uint8_t>(n.flags & (kVertexMark | kArcMark));
  const auto agg = static_cast<std::uint8_t>((own << 2) | ((l.flags | r.flags) & (kAggVertexMark | kAggArcMark)));
  n.flags = static_cast<std::uint8_t>((n.flags & (kIsVertex | kVertexMark | kArcMark)) | agg);
}

void EulerTourForest::rotate(Index x) {
  const Index p = at(x).parent;
  const Index g = at(p).parent;
  if (at(p).left == x) {
    const Index b = at(x).right;
    at(p).left = b;
    if (b != kNone) at(b).parent = p;
    at(x).right = p;
  } else {
    const Index b = at(x).left;
    at(p).right = b;
    if (b != kNone) at(b).parent = p;
    at(x).left = p;
  }
  at(p).parent = x;
  at(x).parent = g;
  if (g != kNone) {
    if (at(g).left == p) {
      at(g).left = x;
    } else {
      at(g).right = x;
    }
  }
  pull(p);
  pull(x);
}

void EulerTourForest::splay(Index x) {
  while (at(x).parent != kNone) {
    const Index p = at(x).parent;
    const Index g = at(p).parent;
    if (g != kNone) {
      const bool zigzig = (at(g).left == p) == (at(p).left == x);
      rotate(zigzig ? p : x);
    }
    rotate(x);
  }
  pull(x);
}

EulerTourForest::Index EulerTourForest::rightmost(Index root) {
  while (at(root).right != kNone) root = at(root).right;
  return root;
}

EulerTourForest::Index EulerTourForest::join(Index a, Index b) {
  if (a == kNone) return b;
  if (b == kNone) return a;
  const Index m = rightmost(a);
  splay(m);
  at(m).right = b;
  at(b).parent = m;
  pull(m);
  return m;
}

EulerTourForest::Index EulerTourForest::reroot(Index x) {
  splay(x);
  const Index l = at(x).left;
  if (l == kNone) return x;
  at(x).left = kNone;
  at(l).parent = kNone;
  pull(x);
  return join(x, l);
}

EulerTourForest::Index EulerTourForest::ensure_vertex(std::int32_t v) {
  Index x = vertex_[static_cast<std::size_t>(v)];
  if (x == kNone) x = make_vertex(v);
  return x;
}

EulerTourForest::Index EulerTourForest::make_vertex(std::int32_t v) {
  const Index i = alloc();
  at(i).flags = kIsVertex;
  at(i).payload = v;
  vertex_[static_cast<std::size_t>(v)] = i;
  pull(i);
  return i;
}

EulerTourForest::Index EulerTourForest::make_arc(std::int32_t edge) {
  const Index i = alloc();
  at(i).payload = edge;
  pull(i);
  return i;
}

EulerTourForest::Index EulerTourForest::build_balanced(std::span<const Index> seq, Index parent) {
  if (seq.empty()) return kNone;
  const std::size_t mid = seq.size() / 2;
  const Index x = seq[mid];
  at(x).parent = parent;
  at(x).left = build_balanced(seq.first(mid), x);
  at(x).right = build_balanced(seq.subspan(mid + 1), x);
  pull(x);
  return x;
}

void EulerTourForest::build_sequence(std::span<const Index> tour) { build_balanced(tour, kNone); }

EulerTourForest::Arcs EulerTourForest::link(std::int32_t u, std::int32_t v, std::int32_t edge) {
  const Index ru = reroot(ensure_vertex(u));
  const Index rv = reroot(ensure_vertex(v));
  const Index a1 = make_arc(edge);
  const Index a2 = make_arc(edge);
  // Tour u.. a1 v.. a2, assembled around the new arcs without splaying.
  at(a1).left = ru;
  at(a1).right = rv;
  at(ru).parent = a1;
  at(rv).parent = a1;
  pull(a1);
  at(a2).left = a1;
  at(a1).parent = a2;
  pull(a2);
  return {a1, a2};
}

void EulerTourForest::cut(Arcs arcs) {
  const auto [a1, a2] = arcs;
  splay(a1);
  const Index l = at(a1).left;
  const Index r = at(a1).right;
  if (l != kNone) at(l).parent = kNone;
  if (r != kNone) at(r).parent = kNone;
  release(a1);

  // Splaying a2 inside r gives r's old root a parent; inside l it does not.
  splay(a2);
  const bool in_right = r != kNone && (r == a2 || at(r).parent != kNone);
  const Index a = at(a2).left;
  const Index b = at(a2).right;
  if (a != kNone) at(a).parent = kNone;
  if (b != kNone) at(b).parent = kNone;
  release(a2);
  if (in_right) {
    join(l, b);  // l a1 [a a2 b]: `a` is the detached subtree
  } else {
    join(a, r);  // [a a2 b] a1 r: `b` is the detached subtree
  }
}

bool EulerTourForest::connected(std::int32_t u, std::int32_t v) {
  if (u == v) return true;
  const Index xu = vertex_[static_cast<std::size_t>(u)];
  const Index xv = vertex_[static_cast<std::size_t>(v)];
  if (xu == kNone || xv == kNone) return false;
  splay(xu);
  Index r = xv;
  while (at(r).parent != kNone) r = at(r).parent;
  splay(xv);
  return r == xu;
}

std::int32_t EulerTourForest::tree_size(std::int32_t v) {
  const Index x = vertex_[static_cast<std::size_t>(v)];
  if (x == kNone) return 1;
  splay(x);
  return at(x).vertices;
}

std::int32_t EulerTourForest::tree_min(std::int32_t v) {
  const Index x = vertex_[static_cast<std::size_t>(v)];
  if (x == kNone) return v;
  splay(x);
  return at(x).min_vertex;
}

void EulerTourForest::set_vertex_mark(std::int32_t v, bool on) {
  const Index x = ensure_vertex(v);
  splay(x);
  if (on) {
    at(x).flags |= kVertexMark;
  } else {
    at(x).flags &= static_cast<std::uint8_t>(~kVertexMark);
  }
  pull(x);
}

void EulerTourForest::set_arc_mark(Index arc, bool on) {
  splay(arc);
  if (on) {
    at(arc).flags |= kArcMark;
  } else {
    at(arc).flags &= static_cast<std::uint8_t>(~kArcMark);
  }
  pull(arc);
}

EulerTourForest::Index EulerTourForest::find_marked(Index root, std::uint8_t own, std::uint8_t agg) {
  if (!(at(root).flags & agg)) return kNone;
  Index n = root;
  for (;;) {
    const Node& nd = at(n);
    if (nd.left != kNone && (at(nd.left).flags & agg)) {
      n = nd.left;
    } else if (nd.flags & own) {
      break;
    } else {
      n = nd.right;
    }
  }
  splay(n);
  return n;
}

std::int32_t EulerTourForest::find_marked_vertex(std::int32_t v) {
  const Index x = vertex_[static_cast<std::size_t>(v)];
  if (x == kNone) return -1;
  splay(x);
  const Index n = find_marked(x, kVertexMark, kAggVertexMark);
  return n == kNone ? -1 : at(n).payload;
}

std::int32_t EulerTourForest::find_marked_arc(std::int32_t v) {
  const Index x = vertex_[static_cast<std::size_t>(v)];
  if (x == kNone) return -1;
  splay(x);
  const Index n = find_marked(x, kArcMark, kAggArcMark);
  return n == kNone ? -1 : at(n).payload;
}

}  // namespace ancestral::dyncon
