#include "fever_forge/pattern.hpp"

#include <memory>
#include <string_view>
#include <utility>

namespace fever_forge {

namespace {

constexpr std::string_view kEscapable = ".*+?()|\\";

struct Node {
  enum class Kind { kChar, kAny, kConcat, kAlternate, kStar, kPlus, kQuest,
                    kGroup };
  Kind kind;
  char c = 0;
  int group = -1;  // capture index for kGroup, -1 when non-capturing
  std::vector<std::unique_ptr<Node>> children;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind kind) {
  auto node = std::make_unique<Node>();
  node->kind = kind;
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : src_(source) {}

  NodePtr parse() {
    NodePtr root = parse_alternation();
    if (pos_ < src_.size()) {
      throw PatternError(pos_, "unbalanced ')'");
    }
    return root;
  }

  int groups() const { return groups_; }

 private:
  NodePtr parse_alternation() {
    NodePtr first = parse_concat();
    if (pos_ >= src_.size() || src_[pos_] != '|') return first;
    NodePtr alt = make(Node::Kind::kAlternate);
    alt->children.push_back(std::move(first));
    while (pos_ < src_.size() && src_[pos_] == '|') {
      ++pos_;
      alt->children.push_back(parse_concat());
    }
    return alt;
  }

  NodePtr parse_concat() {
    NodePtr seq = make(Node::Kind::kConcat);
    while (pos_ < src_.size() && src_[pos_] != '|' && src_[pos_] != ')') {
      seq->children.push_back(parse_repeat());
    }
    return seq;
  }

  NodePtr parse_repeat() {
    NodePtr atom = parse_atom();
    if (pos_ >= src_.size()) return atom;
    Node::Kind kind;
    switch (src_[pos_]) {
      case '*': kind = Node::Kind::kStar; break;
      case '+': kind = Node::Kind::kPlus; break;
      case '?': kind = Node::Kind::kQuest; break;
      default: return atom;
    }
    ++pos_;
    if (pos_ < src_.size() &&
        (src_[pos_] == '*' || src_[pos_] == '+' || src_[pos_] == '?')) {
      throw PatternError(pos_, "stacked or lazy quantifiers are not supported");
    }
    NodePtr rep = make(kind);
    rep->children.push_back(std::move(atom));
    return rep;
  }

  NodePtr parse_atom() {
    const std::size_t start = pos_;
    const char c = src_[pos_];
    switch (c) {
      case '(': {
        ++pos_;
        int group = -1;
        if (pos_ < src_.size() && src_[pos_] == '?') {
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == ':') {
            pos_ += 2;
          } else {
            throw PatternError(pos_, "only (?:...) groups are supported");
          }
        } else {
          group = ++groups_;
        }
        NodePtr inner = parse_alternation();
        if (pos_ >= src_.size() || src_[pos_] != ')') {
          throw PatternError(start, "unclosed '('");
        }
        ++pos_;
        NodePtr node = make(Node::Kind::kGroup);
        node->group = group;
        node->children.push_back(std::move(inner));
        return node;
      }
      case '.':
        ++pos_;
        return make(Node::Kind::kAny);
      case '*':
      case '+':
      case '?':
        throw PatternError(pos_, "quantifier has nothing to repeat");
      case '\\': {
        if (pos_ + 1 >= src_.size()) {
          throw PatternError(pos_, "trailing backslash");
        }
        const char escaped = src_[pos_ + 1];
        if (kEscapable.find(escaped) == std::string_view::npos) {
          throw PatternError(pos_, std::string("unsupported escape \\") +
                                       escaped);
        }
        pos_ += 2;
        NodePtr node = make(Node::Kind::kChar);
        node->c = escaped;
        return node;
      }
      case '[':
      case ']':
        throw PatternError(pos_, "character classes are not supported");
      case '{':
      case '}':
        throw PatternError(pos_, "counted repetition is not supported");
      case '^':
      case '$':
        throw PatternError(pos_, "anchors are implicit; '^' and '$' are not "
                                 "supported");
      default: {
        ++pos_;
        NodePtr node = make(Node::Kind::kChar);
        node->c = c;
        return node;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int groups_ = 0;
};

}  // namespace

class Pattern::Compiler {
 public:
  explicit Compiler(std::vector<Inst>& program) : prog_(program) {}

  void emit(const Node& node) {
    switch (node.kind) {
      case Node::Kind::kChar:
        prog_.push_back({Op::kChar, node.c});
        break;
      case Node::Kind::kAny:
        prog_.push_back({Op::kAny});
        break;
      case Node::Kind::kConcat:
        for (const auto& child : node.children) emit(*child);
        break;
      case Node::Kind::kAlternate: {
        // split L1, next; L1: a; jmp end; next: split ...; last: z; end:
        std::vector<int> jumps;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          const bool last = i + 1 == node.children.size();
          int split = -1;
          if (!last) {
            split = push({Op::kSplit});
            prog_[split].x = here();
          }
          emit(*node.children[i]);
          if (!last) {
            jumps.push_back(push({Op::kJmp}));
            prog_[split].y = here();
          }
        }
        for (int j : jumps) prog_[j].x = here();
        break;
      }
      case Node::Kind::kStar: {
        const int loop = push({Op::kSplit});
        prog_[loop].x = here();
        emit(*node.children[0]);
        const int back = push({Op::kJmp});
        prog_[back].x = loop;
        prog_[loop].y = here();
        break;
      }
      case Node::Kind::kPlus: {
        const int body = here();
        emit(*node.children[0]);
        const int split = push({Op::kSplit});
        prog_[split].x = body;
        prog_[split].y = here();
        break;
      }
      case Node::Kind::kQuest: {
        const int split = push({Op::kSplit});
        prog_[split].x = here();
        emit(*node.children[0]);
        prog_[split].y = here();
        break;
      }
      case Node::Kind::kGroup:
        if (node.group > 0) {
          prog_.push_back({Op::kSave, 0, 2 * (node.group - 1)});
        }
        emit(*node.children[0]);
        if (node.group > 0) {
          prog_.push_back({Op::kSave, 0, 2 * (node.group - 1) + 1});
        }
        break;
    }
  }

 private:
  int here() const { return static_cast<int>(prog_.size()); }
  int push(Inst inst) {
    prog_.push_back(inst);
    return here() - 1;
  }

  std::vector<Inst>& prog_;
};

Pattern Pattern::compile(std::string_view source) {
  Parser parser(source);
  NodePtr root = parser.parse();

  Pattern pattern;
  pattern.source_ = std::string(source);
  pattern.group_count_ = static_cast<std::size_t>(parser.groups());
  Compiler compiler(pattern.program_);
  compiler.emit(*root);
  pattern.program_.push_back({Op::kMatch});
  return pattern;
}

std::optional<std::vector<std::string>> Pattern::match(
    std::string_view text) const {
  // Backtracking in priority order over (pc, pos) states. Without
  // backreferences a state that failed once fails every time, so each state is
  // expanded at most once and the first accepting path is the leftmost-greedy
  // match.
  const std::size_t width = text.size() + 1;
  std::vector<bool> visited(program_.size() * width, false);
  std::vector<long> slots(2 * group_count_, -1);

  struct Job {
    int pc;
    long pos;
    int restore_slot;  // >= 0: restore slots[restore_slot] = pos
  };
  std::vector<Job> stack;
  stack.push_back({0, 0, -1});

  while (!stack.empty()) {
    Job job = stack.back();
    stack.pop_back();
    if (job.restore_slot >= 0) {
      slots[static_cast<std::size_t>(job.restore_slot)] = job.pos;
      continue;
    }
    int pc = job.pc;
    long pos = job.pos;
    for (;;) {
      const std::size_t key =
          static_cast<std::size_t>(pc) * width + static_cast<std::size_t>(pos);
      if (visited[key]) break;
      visited[key] = true;
      const Inst& inst = program_[static_cast<std::size_t>(pc)];
      bool failed = false;
      switch (inst.op) {
        case Op::kChar:
          if (static_cast<std::size_t>(pos) < text.size() &&
              text[static_cast<std::size_t>(pos)] == inst.c) {
            ++pc;
            ++pos;
          } else {
            failed = true;
          }
          break;
        case Op::kAny:
          if (static_cast<std::size_t>(pos) < text.size() &&
              text[static_cast<std::size_t>(pos)] != '\n') {
            ++pc;
            ++pos;
          } else {
            failed = true;
          }
          break;
        case Op::kSplit:
          stack.push_back({inst.y, pos, -1});
          pc = inst.x;
          break;
        case Op::kJmp:
          pc = inst.x;
          break;
        case Op::kSave:
          stack.push_back({0, slots[static_cast<std::size_t>(inst.x)], inst.x});
          slots[static_cast<std::size_t>(inst.x)] = pos;
          ++pc;
          break;
        case Op::kMatch:
          if (static_cast<std::size_t>(pos) == text.size()) {
            std::vector<std::string> groups(group_count_);
            for (std::size_t g = 0; g < group_count_; ++g) {
              const long begin = slots[2 * g];
              const long end = slots[2 * g + 1];
              if (begin >= 0 && end >= begin) {
                groups[g] = std::string(text.substr(
                    static_cast<std::size_t>(begin),
                    static_cast<std::size_t>(end - begin)));
              }
            }
            return groups;
          }
          failed = true;
          break;
      }
      if (failed) break;
    }
  }
  return std::nullopt;
}

}  // namespace fever_forge
