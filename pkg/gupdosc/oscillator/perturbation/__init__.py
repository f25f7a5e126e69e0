from .analysis import (DegeneracyAnalysis, MultiplicityProfile, ScanPoint, ScanResult, critical_field,
                       degeneracy_analysis, field_scan)
from .oracle import SectorSolution, exact_oracle, interior_energies, oracle_slopes, spectrum_by_sector
from .replication import ReplicationReport, ReplicationRow, replicate_paper
from .shifts import (ClusterState, PTReport, degenerate_block, degenerate_shift, first_order_shift,
                     level_cluster)
