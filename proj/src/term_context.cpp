#include "netglm/term_context.hpp"

namespace netglm {

std::vector<int> TermContext::out_neighbors_overlap(int i) const {
  std::vector<int> r;
  for (int j : s_.z.out(i))
    if (overlap(i, j)) r.push_back(j);
  return r;
}

std::vector<int> TermContext::in_neighbors_overlap(int i) const {
  std::vector<int> r;
  for (int j : s_.z.in(i))
    if (overlap(i, j)) r.push_back(j);
  return r;
}

int TermContext::out_degree_overlap(int i) const {
  int k = 0;
  for (int j : s_.z.out(i)) k += overlap(i, j);
  return k;
}

int TermContext::in_degree_overlap(int i) const {
  int k = 0;
  for (int j : s_.z.in(i)) k += overlap(i, j);
  return k;
}

std::vector<int> TermContext::common_partners(int from, int to, PathType type, bool overlap_only) const {
  const Network& z = s_.z;
  const std::vector<int>* a = nullptr;
  const std::vector<int>* b = nullptr;
  switch (type) {
    case PathType::otp: case PathType::symmetric: a = &z.out(from); b = &z.in(to); break;
    case PathType::isp: a = &z.in(from); b = &z.in(to); break;
    case PathType::osp: a = &z.out(from); b = &z.out(to); break;
    case PathType::itp: a = &z.in(from); b = &z.out(to); break;
  }
  std::vector<int> r;
  auto p = a->begin(), q = b->begin();
  while (p != a->end() && q != b->end()) {
    if (*p < *q) {
      ++p;
    } else if (*q < *p) {
      ++q;
    } else {
      int h = *p;
      if (h != from && h != to && (!overlap_only || (overlap(from, h) && overlap(h, to)))) r.push_back(h);
      ++p;
      ++q;
    }
  }
  return r;
}

int TermContext::count_common_partners(int from, int to, PathType type, bool overlap_only) const {
  return static_cast<int>(common_partners(from, to, type, overlap_only).size());
}

}  // namespace netglm
