#ifndef MWE_TRIAGE_TREE_HPP
#define MWE_TRIAGE_TREE_HPP

// Decision trees as data, traversal against an answer oracle, and path
// enumeration.
//
// Each tree has two entries: one for direct-object candidates and one for
// prepositional candidates. Shapes are written as name tables below; a
// name referenced twice is instantiated twice, so the result is always a
// proper tree (single parent per node).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mwe_triage/core.hpp"

namespace mwe {

enum class TreeVariant { BASELINE, MODIFIED };

inline std::string to_string(TreeVariant v) {
  return v == TreeVariant::BASELINE ? "baseline" : "modified";
}

inline TreeVariant variant_from_string(std::string_view text) {
  if (text == "baseline" || text == "BASELINE") return TreeVariant::BASELINE;
  if (text == "modified" || text == "MODIFIED") return TreeVariant::MODIFIED;
  throw FormatError("unknown tree variant '" + std::string(text) + "'", 0,
                    std::string(text));
}

enum class TreeEntry { DIRECT, PP };

inline std::string to_string(TreeEntry e) {
  return e == TreeEntry::DIRECT ? "direct" : "pp";
}

/// Copula lemma for the languages the engine knows about.
inline bool is_copula(std::string_view language, std::string_view lemma) {
  static const std::map<std::string, std::set<std::string>, std::less<>> table = {
      {"fr", {"être"}},           {"en", {"be"}},
      {"pt", {"ser", "estar"}},   {"es", {"ser", "estar"}},
      {"it", {"essere"}},         {"el", {"είμαι"}},
      {"ro", {"fi"}}};
  auto it = table.find(language);
  return it != table.end() && it->second.count(std::string(lemma)) > 0;
}

using NodeId = std::uint32_t;

/// A tree node: a test with two children, a leaf label, or a gate on a
/// surface fact about the candidate (its verb being the copula). Gates are
/// decided without the oracle and leave no step in the trace.
struct TreeNode {
  enum class Kind { TEST, LEAF, COPULA_GATE };
  Kind kind = Kind::LEAF;
  TestId test = TestId::LVC0;
  Label label = Label::NON_MWE;
  NodeId yes = 0;
  NodeId no = 0;

  bool operator==(const TreeNode&) const = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;

  TreeVariant variant() const { return variant_; }
  NodeId entry_direct() const { return entry_direct_; }
  NodeId entry_pp() const { return entry_pp_; }
  NodeId entry(TreeEntry e) const {
    return e == TreeEntry::DIRECT ? entry_direct_ : entry_pp_;
  }
  const TreeNode& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  bool operator==(const DecisionTree&) const = default;

  /// Longest root-to-leaf test count below `id` (gates are free).
  std::size_t height(NodeId id) const {
    const TreeNode& n = node(id);
    switch (n.kind) {
      case TreeNode::Kind::LEAF: return 0;
      case TreeNode::Kind::COPULA_GATE:
        return std::max(height(n.yes), height(n.no));
      case TreeNode::Kind::TEST:
        return 1 + std::max(height(n.yes), height(n.no));
    }
    return 0;
  }

  /// Every test that occurs below `id`, in first-seen preorder.
  std::vector<TestId> tests_below(NodeId id) const {
    std::vector<TestId> out;
    collect_tests(id, out);
    return out;
  }

  struct Row {
    std::string name;
    TreeNode::Kind kind;
    TestId test;
    std::string yes;
    std::string no;
  };

  // Builds from a name table. Children named "@LABEL" are leaves, e.g.
  // "@VID". Throws std::logic_error on dangling names or cycles.
  static DecisionTree from_table(TreeVariant variant, const std::vector<Row>& rows,
                                 const std::string& direct_root,
                                 const std::string& pp_root) {
    DecisionTree t;
    t.variant_ = variant;
    std::map<std::string, const Row*> by_name;
    for (const auto& r : rows) by_name[r.name] = &r;
    std::vector<std::string> stack;
    t.entry_direct_ = t.instantiate(direct_root, by_name, stack);
    t.entry_pp_ = t.instantiate(pp_root, by_name, stack);
    return t;
  }

  static DecisionTree single_leaf(TreeVariant variant, Label label) {
    DecisionTree t;
    t.variant_ = variant;
    t.nodes_.push_back(TreeNode{TreeNode::Kind::LEAF, TestId::LVC0, label, 0, 0});
    t.entry_direct_ = 0;
    t.entry_pp_ = 0;
    return t;
  }

 private:
  NodeId instantiate(const std::string& name,
                     const std::map<std::string, const Row*>& by_name,
                     std::vector<std::string>& stack) {
    if (!name.empty() && name[0] == '@') {
      nodes_.push_back(TreeNode{TreeNode::Kind::LEAF, TestId::LVC0,
                                label_from_display(name.substr(1)), 0, 0});
      return static_cast<NodeId>(nodes_.size() - 1);
    }
    auto it = by_name.find(name);
    if (it == by_name.end())
      throw std::logic_error("tree table: undefined node '" + name + "'");
    if (std::find(stack.begin(), stack.end(), name) != stack.end())
      throw std::logic_error("tree table: cycle through '" + name + "'");
    const Row& row = *it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(TreeNode{row.kind, row.test, Label::NON_MWE, 0, 0});
    stack.push_back(name);
    NodeId yes = instantiate(row.yes, by_name, stack);
    NodeId no = instantiate(row.no, by_name, stack);
    stack.pop_back();
    nodes_[id].yes = yes;
    nodes_[id].no = no;
    return id;
  }

  void collect_tests(NodeId id, std::vector<TestId>& out) const {
    const TreeNode& n = node(id);
    if (n.kind == TreeNode::Kind::LEAF) return;
    if (n.kind == TreeNode::Kind::TEST &&
        std::find(out.begin(), out.end(), n.test) == out.end())
      out.push_back(n.test);
    collect_tests(n.yes, out);
    collect_tests(n.no, out);
  }

  TreeVariant variant_ = TreeVariant::BASELINE;
  std::vector<TreeNode> nodes_;
  NodeId entry_direct_ = 0;
  NodeId entry_pp_ = 0;
};

namespace detail {

using K = TreeNode::Kind;

// Shared by both variants: the VID-specific subtree.
inline const std::vector<DecisionTree::Row>& vid_subtree_rows() {
  static const std::vector<DecisionTree::Row> rows = {
      {"VIDSUB", K::TEST, TestId::VID2, "@VID", "VIDSUB.VID3"},
      {"VIDSUB.VID3", K::TEST, TestId::VID3, "@VID", "@NON_MWE"},
  };
  return rows;
}

inline const std::vector<DecisionTree::Row>& baseline_rows() {
  static const std::vector<DecisionTree::Row> rows = [] {
    std::vector<DecisionTree::Row> r = {
        {"D.LVC0", K::TEST, TestId::LVC0, "D.LVC1", "VIDSUB"},
        {"D.LVC1", K::TEST, TestId::LVC1, "D.LVC2", "VIDSUB"},
        {"D.LVC2", K::TEST, TestId::LVC2, "D.LVC3", "VIDSUB"},
        {"D.LVC3", K::TEST, TestId::LVC3, "D.LVC4", "VIDSUB"},
        {"D.LVC4", K::TEST, TestId::LVC4, "@LVC.full", "VIDSUB"},
        {"P.PPI1", K::TEST, TestId::PPI1, "P.VID2", "VIDSUB"},
        {"P.VID2", K::TEST, TestId::VID2, "@VID", "@NON_MWE"},
    };
    const auto& v = vid_subtree_rows();
    r.insert(r.end(), v.begin(), v.end());
    return r;
  }();
  return rows;
}

inline const std::vector<DecisionTree::Row>& modified_rows() {
  static const std::vector<DecisionTree::Row> rows = [] {
    std::vector<DecisionTree::Row> r = {
        {"D.LVC0", K::TEST, TestId::LVC0, "D.LVC1", "VIDSUB"},
        {"D.LVC1", K::TEST, TestId::LVC1, "D.LVC2", "VIDSUB"},
        {"D.LVC2", K::TEST, TestId::LVC2, "D.LVC3", "VIDSUB"},
        {"D.LVC3", K::TEST, TestId::LVC3, "D.LVC4", "ASP1"},
        {"D.LVC4", K::TEST, TestId::LVC4, "@LVC.full", "VIDSUB"},
        // ASP1 only decides where the evidence comes from; ASP2 is asked
        // either way.
        {"ASP1", K::TEST, TestId::ASP1, "ASP2", "ASP2"},
        {"ASP2", K::TEST, TestId::ASP2, "@LVC.asp", "VIDSUB"},
        {"P.PPI1", K::TEST, TestId::PPI1, "P.LVC0BIS", "VIDSUB"},
        {"P.LVC0BIS", K::TEST, TestId::LVC0BIS, "P.LVC1BIS", "VIDSUB"},
        {"P.LVC1BIS", K::TEST, TestId::LVC1BIS, "P.LVC2BIS", "VIDSUB"},
        {"P.LVC2BIS", K::TEST, TestId::LVC2BIS, "P.COP1", "VIDSUB"},
        {"P.COP1", K::TEST, TestId::COP1, "P.ASP2.cop", "ASP2"},
        {"P.ASP2.cop", K::TEST, TestId::ASP2, "@LVC.asp", "P.COPULA"},
        // The copula itself with its PP predicate is an LVC proper.
        {"P.COPULA", K::COPULA_GATE, TestId::LVC0, "@LVC.full", "VIDSUB"},
    };
    const auto& v = vid_subtree_rows();
    r.insert(r.end(), v.begin(), v.end());
    return r;
  }();
  return rows;
}

}  // namespace detail

inline DecisionTree build_tree(TreeVariant variant) {
  if (variant == TreeVariant::BASELINE)
    return DecisionTree::from_table(variant, detail::baseline_rows(), "D.LVC0",
                                    "P.PPI1");
  return DecisionTree::from_table(variant, detail::modified_rows(), "D.LVC0",
                                  "P.PPI1");
}

/// Built once per variant; trees are immutable.
inline const DecisionTree& shared_tree(TreeVariant variant) {
  static const DecisionTree baseline = build_tree(TreeVariant::BASELINE);
  static const DecisionTree modified = build_tree(TreeVariant::MODIFIED);
  return variant == TreeVariant::BASELINE ? baseline : modified;
}

using AnswerOracle = std::function<std::pair<Answer, EvidenceSource>(TestId)>;

inline TreeEntry entry_for(const Candidate& c) {
  return c.is_prepositional() ? TreeEntry::PP : TreeEntry::DIRECT;
}

/// Walks from the entry matching the candidate. The first UNKNOWN answer
/// stops the walk with leaf UNRESOLVED; the UNKNOWN step is kept as the
/// last step of the partial trace.
inline DecisionTrace traverse(const DecisionTree& tree, TreeEntry entry,
                              bool verb_is_copula, const AnswerOracle& oracle) {
  DecisionTrace trace;
  NodeId id = tree.entry(entry);
  for (;;) {
    const TreeNode& n = tree.node(id);
    switch (n.kind) {
      case TreeNode::Kind::LEAF:
        trace.leaf = n.label;
        return trace;
      case TreeNode::Kind::COPULA_GATE:
        id = verb_is_copula ? n.yes : n.no;
        break;
      case TreeNode::Kind::TEST: {
        auto [answer, evidence] = oracle(n.test);
        trace.steps.push_back(TraceStep{n.test, answer, std::move(evidence)});
        if (answer == Answer::UNKNOWN) {
          trace.leaf = Label::UNRESOLVED;
          return trace;
        }
        id = answer == Answer::YES ? n.yes : n.no;
        break;
      }
    }
  }
}

inline DecisionTrace traverse(const DecisionTree& tree, const Candidate& candidate,
                              const AnswerOracle& oracle) {
  return traverse(tree, entry_for(candidate),
                  is_copula(candidate.language, candidate.verb_lemma), oracle);
}

/// Node reached after replaying the trace's decided steps, i.e. the node
/// whose test is next (or the blocked test for an unresolved trace).
/// Returns nullopt if the trace does not follow the tree.
inline std::optional<NodeId> node_after(const DecisionTree& tree, TreeEntry entry,
                                        bool verb_is_copula,
                                        const DecisionTrace& trace) {
  NodeId id = tree.entry(entry);
  auto skip_gates = [&] {
    while (tree.node(id).kind == TreeNode::Kind::COPULA_GATE)
      id = verb_is_copula ? tree.node(id).yes : tree.node(id).no;
  };
  for (const auto& step : trace.steps) {
    skip_gates();
    const TreeNode& n = tree.node(id);
    if (n.kind != TreeNode::Kind::TEST || n.test != step.test) return std::nullopt;
    if (step.answer == Answer::UNKNOWN) return id;
    id = step.answer == Answer::YES ? n.yes : n.no;
  }
  skip_gates();
  return id;
}

/// Checks that the trace follows parent/child edges and ends where it says.
inline bool validate_trace(const DecisionTree& tree, TreeEntry entry,
                           bool verb_is_copula, const DecisionTrace& trace) {
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i].answer == Answer::UNKNOWN &&
        (i + 1 != trace.steps.size() || trace.leaf != Label::UNRESOLVED))
      return false;
  }
  auto end = node_after(tree, entry, verb_is_copula, trace);
  if (!end) return false;
  const TreeNode& n = tree.node(*end);
  if (trace.leaf == Label::UNRESOLVED)
    return !trace.steps.empty() && trace.steps.back().answer == Answer::UNKNOWN &&
           n.kind == TreeNode::Kind::TEST;
  return n.kind == TreeNode::Kind::LEAF && n.label == trace.leaf;
}

/// An oracle that answers from a recorded trace; UNKNOWN for tests the
/// trace never asked.
inline AnswerOracle replay_oracle(const DecisionTrace& trace) {
  return [steps = trace.steps](TestId t) -> std::pair<Answer, EvidenceSource> {
    for (const auto& s : steps)
      if (s.test == t) return {s.answer, s.evidence};
    return {Answer::UNKNOWN, EvidenceSource::surface("replay")};
  };
}

/// One branch taken on a path: a test answer or the copula gate outcome.
struct Branch {
  enum class Kind { TEST, COPULA_GATE };
  Kind kind = Kind::TEST;
  TestId test = TestId::LVC0;
  bool value = false;

  bool operator==(const Branch&) const = default;
};

struct TreePath {
  TreeEntry entry = TreeEntry::DIRECT;
  std::vector<Branch> assignment;
  Label leaf = Label::NON_MWE;
};

namespace detail {
inline void walk_paths(const DecisionTree& tree, NodeId id, TreeEntry entry,
                       std::vector<Branch>& prefix, std::vector<TreePath>& out) {
  const TreeNode& n = tree.node(id);
  if (n.kind == TreeNode::Kind::LEAF) {
    out.push_back(TreePath{entry, prefix, n.label});
    return;
  }
  Branch::Kind k = n.kind == TreeNode::Kind::TEST ? Branch::Kind::TEST
                                                  : Branch::Kind::COPULA_GATE;
  prefix.push_back(Branch{k, n.test, true});
  walk_paths(tree, n.yes, entry, prefix, out);
  prefix.back().value = false;
  walk_paths(tree, n.no, entry, prefix, out);
  prefix.pop_back();
}
}  // namespace detail

/// Every root-to-leaf path of one entry with the answers that select it.
inline std::vector<TreePath> enumerate_paths(const DecisionTree& tree, TreeEntry entry) {
  std::vector<TreePath> out;
  std::vector<Branch> prefix;
  detail::walk_paths(tree, tree.entry(entry), entry, prefix, out);
  return out;
}

/// Paths of both entries, direct first.
inline std::vector<TreePath> enumerate_paths(const DecisionTree& tree) {
  auto out = enumerate_paths(tree, TreeEntry::DIRECT);
  auto pp = enumerate_paths(tree, TreeEntry::PP);
  out.insert(out.end(), pp.begin(), pp.end());
  return out;
}

/// Structural problems: repeated test on a path, leaf label outside the
/// allowed set, shared or unreachable nodes. Empty when the tree is sound.
inline std::vector<std::string> structural_problems(const DecisionTree& tree) {
  std::vector<std::string> problems;
  std::vector<int> parents(tree.nodes().size(), 0);
  for (const auto& n : tree.nodes()) {
    if (n.kind == TreeNode::Kind::LEAF) continue;
    if (n.yes >= tree.nodes().size() || n.no >= tree.nodes().size()) {
      problems.push_back("dangling child");
      return problems;
    }
    ++parents[n.yes];
    ++parents[n.no];
  }
  for (std::size_t i = 0; i < parents.size(); ++i) {
    bool root = i == tree.entry_direct() || i == tree.entry_pp();
    if (parents[i] > 1) problems.push_back("node " + std::to_string(i) + " has several parents");
    if (!root && parents[i] == 0) problems.push_back("node " + std::to_string(i) + " unreachable");
    if (root && parents[i] != 0) problems.push_back("root " + std::to_string(i) + " has a parent");
  }
  for (TreeEntry e : {TreeEntry::DIRECT, TreeEntry::PP}) {
    for (const auto& p : enumerate_paths(tree, e)) {
      std::set<TestId> seen;
      for (const auto& b : p.assignment)
        if (b.kind == Branch::Kind::TEST && !seen.insert(b.test).second)
          problems.push_back("test " + to_string(b.test) + " repeated on a path of " +
                             to_string(e) + " entry");
      if (p.leaf != Label::VID && p.leaf != Label::LVC_FULL &&
          p.leaf != Label::LVC_ASP && p.leaf != Label::NON_MWE)
        problems.push_back("leaf label " + to_string(p.leaf) + " not allowed");
    }
  }
  return problems;
}

}  // namespace mwe

#endif  // MWE_TRIAGE_TREE_HPP
