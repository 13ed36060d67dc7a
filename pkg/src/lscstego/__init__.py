"""LSB-channel steganography toolkit with exhaustive security checking."""

from .embedding import (CapacityError, embed, embed_in_image, extract,
                        extract_from_image, randomize_lscs, substitute)
from .media import (CoefficientPartition, Image, SignificationTable,
                    ThresholdError, byte_plane_significance, extract_bits,
                    parse_pgm, partition, significance, write_bits, write_pgm)
from .security import (DistributionTable, TestReport, check_stego_security,
                       chi_square_uniformity, enumerate_stego_distribution,
                       lsb_chi_square_attack, monobit_test, runs_test)
from .strategy import (BbsState, StegoKey, Strategy, StrategyError,
                       bbs_next_bit, classify_sequence, generate_strategy,
                       sequence_support)

__version__ = "0.1.0"
