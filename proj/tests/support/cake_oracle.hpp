#pragma once

// closed form expectations for the cake fixture. the recipe is a five
// way conjunction of the ingredients, battered, then baked with the pan;
// each stage carries a toggle that models it misfiring. frozen here so
// the model file, the graph translation, and the solver are all checked
// against the same arithmetic.

namespace testsupport {

struct CakeVals {
  int mix, batter, bake, cake;
};

inline CakeVals cakeEquations(int w, int s, int e, int f, int b, int p,
                              int u1 = 0, int u2 = 0, int u3 = 0, int u4 = 0) {
  CakeVals v;
  v.mix = (w & s & e & f & b) ^ u1;
  v.batter = v.mix ^ u2;
  v.bake = (v.batter & p) ^ u3;
  v.cake = v.bake ^ u4;
  return v;
}

}  // namespace testsupport
