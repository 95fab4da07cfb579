fn main() {
    // CLI wiring lands after the solver modules.
}
