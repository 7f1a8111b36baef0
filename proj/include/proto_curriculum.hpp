#ifndef PROTO_CURRICULUM_HPP
#define PROTO_CURRICULUM_HPP

#include "proto_curriculum/davies_bouldin.hpp"
#include "proto_curriculum/embedding.hpp"
#include "proto_curriculum/errors.hpp"
#include "proto_curriculum/io.hpp"
#include "proto_curriculum/kmeans.hpp"
#include "proto_curriculum/oracles.hpp"
#include "proto_curriculum/pipeline.hpp"
#include "proto_curriculum/prototypicality.hpp"
#include "proto_curriculum/random.hpp"
#include "proto_curriculum/sampler.hpp"
#include "proto_curriculum/schedule.hpp"

#endif  // PROTO_CURRICULUM_HPP
