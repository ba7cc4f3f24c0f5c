# Configuration and export utilities package