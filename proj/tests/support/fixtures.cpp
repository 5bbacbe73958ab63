#include "fixtures.hpp"

namespace fixtures {

hcrep::RatingMatrix toy3x3() {
    hcrep::RatingMatrixBuilder builder;
    builder.add("u0", "i0", 1);
    builder.add("u0", "i1", 5);
    builder.add("u0", "i2", 4);
    builder.add("u1", "i0", 1);
    builder.add("u1", "i1", 3);
    builder.add("u1", "i2", 4);
    builder.add("u2", "i0", 2);
    builder.add("u2", "i1", 3);
    builder.add("u2", "i2", 4);
    return std::move(builder).build();
}

hcrep::RatingMatrix cf3() {
    hcrep::RatingMatrixBuilder builder;
    builder.add("u0", "i0", 5);
    builder.add("u0", "i1", 3);
    builder.add("u1", "i0", 4);
    builder.add("u1", "i1", 2);
    builder.add("u1", "i2", 5);
    builder.add("u2", "i0", 1);
    builder.add("u2", "i1", 5);
    builder.add("u2", "i2", 1);
    return std::move(builder).build();
}

}  // namespace fixtures
