fn main() {
    std::process::exit(contact_bundles::cli::run_cli());
}
