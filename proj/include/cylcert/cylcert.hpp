#pragma once

#include "cylcert/rational.hpp"
#include "cylcert/varctx.hpp"
#include "cylcert/tower.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/ringhom.hpp"
#include "cylcert/division.hpp"
#include "cylcert/poly_io.hpp"
#include "cylcert/series.hpp"
#include "cylcert/linbez.hpp"
#include "cylcert/matrix.hpp"
#include "cylcert/linsolve.hpp"
#include "cylcert/modification.hpp"
#include "cylcert/autonorm.hpp"
#include "cylcert/classify.hpp"
#include "cylcert/cylinder.hpp"
#include "cylcert/geom2.hpp"
#include "cylcert/certificate.hpp"
#include "cylcert/report.hpp"
#include "cylcert/scenario.hpp"
