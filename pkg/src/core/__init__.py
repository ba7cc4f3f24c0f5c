# Term, instruction and thread data types package