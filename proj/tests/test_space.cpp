// Licensed under the Apache License 2.0 (see LICENSE file).
#include "doctest.h"
#include "helpers.hpp"

#include "continua/poly.hpp"

using namespace continua;
using namespace continua::testing;

namespace {

GraphPtr tripod() {
  std::vector<MetricGraph::Edge> edges;
  edges.push_back({"e1", 0, 1, Rat(1)});
  edges.push_back({"e2", 0, 2, Rat(1)});
  edges.push_back({"e3", 0, 3, Rat(1, 2)});
  return std::make_shared<const MetricGraph>(
      std::vector<std::string>{"c", "a", "b", "d"}, std::move(edges));
}

}  // namespace

TEST_CASE("metric graph basics") {
  GraphPtr i = make_interval_graph(Rat(1));
  CHECK(i->vertex_count() == 2);
  CHECK(i->edge_count() == 1);
  CHECK(i->connected());
  CHECK(i->is_arc());

  GraphPtr c = make_circle_graph(Rat(1));
  CHECK(c->connected());
  CHECK_FALSE(c->is_arc());
  CHECK(c->degree(0) == 2);  // the loop counts twice

  GraphPtr t = tripod();
  CHECK(t->connected());
  CHECK_FALSE(t->is_arc());
  CHECK(t->degree(0) == 3);
  CHECK_THROWS_AS(t->arc_layout(), InvalidInput);
}

TEST_CASE("components and arc layout") {
  std::vector<MetricGraph::Edge> edges;
  edges.push_back({"e1", 0, 1, Rat(1)});
  edges.push_back({"e2", 2, 3, Rat(2)});
  MetricGraph g({"a", "b", "c", "d"}, edges);
  auto comp = g.components();
  CHECK(comp.count == 2);
  CHECK(comp.edge_component[0] != comp.edge_component[1]);

  // A two-edge arc traversed b <- a -> never mind: a-b, b-c.
  std::vector<MetricGraph::Edge> path;
  path.push_back({"e1", 1, 0, Rat(1)});
  path.push_back({"e2", 1, 2, Rat(1, 2)});
  MetricGraph arc({"m", "l", "r"}, path);
  CHECK(arc.is_arc());
  auto layout = arc.arc_layout();
  CHECK(layout.total_length == Rat(3, 2));
  CHECK(layout.edge_order.size() == 2);
}

TEST_CASE("invalid graphs rejected") {
  std::vector<MetricGraph::Edge> edges;
  edges.push_back({"e", 0, 1, Rat(0)});
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, edges), InvalidInput);
  edges[0].length = Rat(1);
  edges[0].v = 7;
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, edges), InvalidInput);
  edges[0].v = 1;
  edges.push_back({"e", 0, 1, Rat(1)});
  CHECK_THROWS_AS(MetricGraph({"a", "b"}, edges), InvalidInput);
}

TEST_CASE("points canonicalize to vertices at edge endpoints") {
  GraphPtr g = make_interval_graph(Rat(1));
  Point p = Point::on_edge(*g, 0, Rat(0));
  CHECK(p.edge == -1);
  CHECK(p.vertex == 0);
  Point q = Point::on_edge(*g, 0, Rat(1));
  CHECK(q.vertex == 1);
  Point r = Point::on_edge(*g, 0, Rat(1, 3));
  CHECK(r.edge == 0);
  CHECK_THROWS_AS(Point::on_edge(*g, 0, Rat(2)), InvalidInput);
}

TEST_CASE("pl arithmetic is exact at random rational points") {
  GraphPtr g = tripod();
  PLSampler sampler(g, 7);
  for (int round = 0; round < 10; ++round) {
    PLFunction f = sampler.sample(Rat(-1), Rat(1), 3);
    PLFunction h = sampler.sample(Rat(-2), Rat(2), 2);
    PLFunction sum = f.add(h);
    PLFunction diff = f.sub(h);
    PLFunction sc = f.scale(Rat(-3, 7));
    PLFunction mn = f.plmin(h);
    PLFunction mx = f.plmax(h);
    PLFunction ab = f.plabs();
    for (const Point& p : grid_points(g, 100)) {
      Rat fv = f.eval(p), hv = h.eval(p);
      CHECK(sum.eval(p) == fv + hv);
      CHECK(diff.eval(p) == fv - hv);
      CHECK(sc.eval(p) == fv * Rat(-3, 7));
      CHECK(mn.eval(p) == std::min(fv, hv));
      CHECK(mx.eval(p) == std::max(fv, hv));
      CHECK(ab.eval(p) == rat_abs(fv));
    }
  }
}

TEST_CASE("pl extrema carry attaining witnesses") {
  GraphPtr g = tripod();
  PLSampler sampler(g, 11);
  for (int round = 0; round < 20; ++round) {
    PLFunction f = sampler.sample(Rat(-1), Rat(1), 4);
    Point wmin, wmax;
    Rat lo = f.min_value(&wmin), hi = f.max_value(&wmax);
    CHECK(f.eval(wmin) == lo);
    CHECK(f.eval(wmax) == hi);
    for (const Point& p : grid_points(g, 64)) {
      Rat v = f.eval(p);
      CHECK(v >= lo);
      CHECK(v <= hi);
    }
    CHECK(f.sup_norm() == std::max(rat_abs(lo), rat_abs(hi)));
  }
}

TEST_CASE("arc polyline roundtrip and composition") {
  GraphPtr g = make_interval_graph(Rat(1));
  PLSampler sampler(g, 3);
  PLFunction f = sampler.sample(Rat(0), Rat(1), 5);
  Polyline flat = f.to_arc_polyline();
  PLFunction back = PLFunction::from_arc_polyline(g, flat);
  CHECK(back == f);

  // compose(outer, inner) = outer after inner, exactly.
  Polyline outer{{Rat(0), Rat(1)}, {Rat(1, 2), Rat(0)}, {Rat(1), Rat(1)}};
  PLFunction composed = compose(outer, f);
  for (const Point& p : grid_points(g, 97))
    CHECK(composed.eval(p) == polyline_eval(outer, f.eval(p)));
}

TEST_CASE("piecewise polynomial products and norms") {
  GraphPtr g = make_interval_graph(Rat(1));
  PLFunction x = PLFunction::arc_coordinate(g);
  PiecewisePoly q = PiecewisePoly::mul(x, x.add_const(Rat(-1)));  // x(x-1)
  CHECK(q.eval_edge(0, Rat(1, 2)) == Rat(-1, 4));
  CertifiedValue n = q.sup_norm(Rat(1, 1000000));
  CHECK(n.lower <= Rat(1, 4));
  CHECK(n.upper >= Rat(1, 4));
  CHECK(n.width() <= Rat(1, 1000000));

  Extrema ex = q.extrema(Rat(1, 1000000));
  CHECK(ex.min.lower <= Rat(-1, 4));
  CHECK(ex.min.upper >= Rat(-1, 4));
  CHECK(ex.max.lower <= 0);
  CHECK(ex.max.upper >= 0);
}

TEST_CASE("quartic sup-norm matches the dense grid oracle") {
  GraphPtr g = make_interval_graph(Rat(1));
  PLSampler sampler(g, 23);
  for (int round = 0; round < 20; ++round) {
    PLFunction a = sampler.sample(Rat(-1), Rat(1), 3);
    PLFunction b = sampler.sample(Rat(-1), Rat(1), 3);
    PiecewisePoly prod = PiecewisePoly::mul(a, b).mul(PiecewisePoly::mul(a, b));
    CHECK(prod.max_degree() <= 4);
    CertifiedValue n = prod.sup_norm(Rat(1, Int("1000000000")));
    double oracle = 0;
    Samples sa = dense_samples(a, 10000), sb = dense_samples(b, 10000);
    for (std::size_t i = 0; i < sa[0].size(); ++i) {
      double p = sa[0][i] * sb[0][i];
      oracle = std::max(oracle, std::fabs(p * p));
    }
    CHECK(cv_dist(n, oracle) < 1e-3);
  }
}

TEST_CASE("root isolation finds exactly the real roots") {
  Poly p({Rat(2, 9), Rat(-1), Rat(1)});  // (t - 1/3)(t - 2/3)
  auto roots = isolate_roots(p, Rat(0), Rat(1), Rat(1, 1000000));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].lower <= Rat(1, 3));
  CHECK(roots[0].upper >= Rat(1, 3));
  CHECK(roots[1].lower <= Rat(2, 3));
  CHECK(roots[1].upper >= Rat(2, 3));
  CHECK(isolate_roots(Poly({Rat(1), Rat(0), Rat(1)}), Rat(-10), Rat(10),
                      Rat(1, 100))
            .empty());
}

TEST_CASE("superlevel monotonicity") {
  GraphPtr g = tripod();
  PLSampler sampler(g, 31);
  for (int round = 0; round < 10; ++round) {
    PLFunction f = sampler.sample(Rat(-1), Rat(1), 3);
    OpenSet big = OpenSet::superlevel(f, Rat(1, 8));
    OpenSet small = OpenSet::superlevel(f, Rat(1, 2));
    Point w;
    CHECK(is_subset(small, big, &w));
  }
}

TEST_CASE("covers agrees with the grid oracle") {
  GraphPtr g = tripod();
  PLSampler sampler(g, 41);
  auto pts = grid_points(g, 200);
  for (int round = 0; round < 25; ++round) {
    std::vector<OpenSet> sets;
    int k = 2 + static_cast<int>(sampler.next_raw() % 3);
    for (int i = 0; i < k; ++i)
      sets.emplace_back(sampler.sample(Rat(-1, 2), Rat(1), 3));
    CoverCheck cc = covers(g, sets);
    if (cc.covered) {
      for (const Point& p : pts) {
        bool in = false;
        for (const auto& s : sets) in = in || s.contains_point(p);
        CHECK(in);
      }
    } else {
      REQUIRE(cc.witness.has_value());
      for (const auto& s : sets) CHECK_FALSE(s.contains_point(*cc.witness));
    }
  }
}

TEST_CASE("open components partition the set") {
  GraphPtr g = make_circle_graph(Rat(1));
  // Two arcs: positive on (0, 1/4) and (1/2, 3/4).
  PLFunction gen(g, {{{Rat(0), Rat(0)},
                      {Rat(1, 8), Rat(1)},
                      {Rat(1, 4), Rat(0)},
                      {Rat(1, 2), Rat(0)},
                      {Rat(5, 8), Rat(1)},
                      {Rat(3, 4), Rat(0)},
                      {Rat(1), Rat(0)}}});
  OpenSet u(gen);
  auto comps = open_components(u);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].intersect(comps[1]).is_empty());
  // Union equals the input on a grid.
  for (const Point& p : grid_points(g, 160)) {
    bool in = u.contains_point(p);
    bool in_union =
        comps[0].contains_point(p) || comps[1].contains_point(p);
    CHECK(in == in_union);
  }
}

TEST_CASE("open components match a grid flood fill on random sets") {
  GraphPtr g = tripod();
  PLSampler sampler(g, 53);
  for (int round = 0; round < 10; ++round) {
    PLFunction f = sampler.sample(Rat(-1), Rat(1), 4);
    OpenSet u(f);
    auto comps = open_components(u);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (std::size_t j = i + 1; j < comps.size(); ++j)
        CHECK(comps[i].intersect(comps[j]).is_empty());
    OpenSet un = u;
    if (!comps.empty()) {
      un = comps[0];
      for (std::size_t i = 1; i < comps.size(); ++i) un = un.unite(comps[i]);
    }
    for (const Point& p : grid_points(g, 128))
      CHECK(u.contains_point(p) ==
            (!comps.empty() && un.contains_point(p)));
  }
}

TEST_CASE("mesh cells stay inside the graph and cover it") {
  for (GraphPtr g : {make_interval_graph(Rat(1)), make_circle_graph(Rat(1)),
                     tripod()}) {
    auto cells = mesh_cells(g, 3);
    CHECK(!cells.empty());
    CHECK(covers(g, cells).covered);
  }
}

TEST_CASE("interval cell and vertex star validation") {
  GraphPtr g = make_interval_graph(Rat(1));
  CHECK_THROWS_AS(interval_cell(g, 0, Rat(1, 2), Rat(1, 2)), InvalidInput);
  CHECK_THROWS_AS(interval_cell(g, 0, Rat(-1, 2), Rat(1, 2)), InvalidInput);
  CHECK_THROWS_AS(vertex_star(g, 0, {Rat(1)}), InvalidInput);
  OpenSet star = vertex_star(g, 0, {Rat(3, 4)});
  CHECK(star.contains_point(Point::at_vertex(0)));
  CHECK(star.contains_point(Point::on_edge(*g, 0, Rat(1, 2))));
  CHECK_FALSE(star.contains_point(Point::on_edge(*g, 0, Rat(3, 4))));

  GraphPtr c = make_circle_graph(Rat(1));
  CHECK_THROWS_AS(vertex_star(c, 0, {Rat(2, 3), Rat(2, 3)}), InvalidInput);
  OpenSet half = vertex_star(c, 0, {Rat(1, 2), Rat(1, 2)});
  CHECK(half.contains_point(Point::on_edge(*c, 0, Rat(1, 4))));
  CHECK_FALSE(half.contains_point(Point::on_edge(*c, 0, Rat(1, 2))));
}

TEST_CASE("closed sets decide emptiness and totality") {
  GraphPtr g = make_interval_graph(Rat(1));
  PLFunction x = PLFunction::arc_coordinate(g);
  ClosedSet below(x.add_const(Rat(-1, 2)));  // {x <= 1/2}
  CHECK_FALSE(below.is_empty());
  Point cx;
  CHECK_FALSE(below.is_everything(&cx));
  CHECK(x.eval(cx) > Rat(1, 2));
  ClosedSet all(PLFunction::constant(g, Rat(-1)));
  CHECK(all.is_everything());
}
