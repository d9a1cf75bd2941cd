fn main() {
    // Command surface lands once the library layers are in place.
    eprintln!("cfl: not yet wired up");
    std::process::exit(2);
}
