#pragma once

#include "fullgroup/error.hpp"
#include "fullgroup/word.hpp"
#include "fullgroup/rational.hpp"
#include "fullgroup/clopen.hpp"
#include "fullgroup/backend.hpp"
#include "fullgroup/element.hpp"
#include "fullgroup/environment.hpp"
#include "fullgroup/trace.hpp"
#include "fullgroup/transfer.hpp"
#include "fullgroup/decomposition.hpp"
#include "fullgroup/certificate.hpp"
#include "fullgroup/codec.hpp"
#include "fullgroup/json_io.hpp"
#include "fullgroup/random.hpp"
#include "fullgroup/oracle.hpp"
#include "fullgroup/selftest.hpp"
