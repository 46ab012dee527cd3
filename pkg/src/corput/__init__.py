# corput - exact discrepancy of the base-2 Van der Corput sequence

__version__ = "0.1.0"
