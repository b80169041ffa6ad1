# Neural network package
