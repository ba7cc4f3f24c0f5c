# PGA instruction sequence toolkit package