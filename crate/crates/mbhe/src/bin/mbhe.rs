fn main() {
    println!("mbhe");
}
