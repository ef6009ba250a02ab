fn main() {
    hooknet::cli::main()
}
